"""Print who wins the n-round EF game on pairs of finite linear orders."""

from ordlab.ef_engine import who_wins
from ordlab.structures import linear_order

SIZES = range(1, 9)

for rounds in range(4):
    print(f"rounds = {rounds}  (D = duplicator wins, S = spoiler wins)")
    print("    " + " ".join(f"{k:>2}" for k in SIZES))
    for m in SIZES:
        row = ["D" if who_wins(linear_order(m), linear_order(k), rounds).duplicator_wins
               else "S" for k in SIZES]
        print(f"{m:>2}  " + " ".join(f"{c:>2}" for c in row))
    print()
