"""Check both translations on every sentence up to a small size."""

import sys

from ordlab.formula import (TableCache, enumerate_formulas, evaluate_batch, translate_plus,
                            translate_prime)
from ordlab.structures import powerset_algebra, two_sorted

size = int(sys.argv[1]) if len(sys.argv) > 1 else 5
grid = [(g, t) for g in (1, 2, 3) for t in (1, 2, 3)]
sorted_models = TableCache([two_sorted(g, t) for g, t in grid])
algebras = TableCache([powerset_algebra(g, threshold=t) for g, t in grid])

for tag, translate, source, target in (("l1s", translate_plus, sorted_models, algebras),
                                       ("lbs", translate_prime, algebras, sorted_models)):
    total = bad = 0
    for f in enumerate_formulas(tag, size, size):
        total += 1
        bad += not (evaluate_batch(f, source) == evaluate_batch(translate(f), target)).all()
    print(f"{tag}: {total} sentences of size <= {size}, {bad} mismatches")
