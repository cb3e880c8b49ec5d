"""Cut-and-zip surgery on a six point linear order."""

import json

from ordlab.preorder_lab import PreorderSpec, SurgeryInstance, seg_ideal, surgery, \
    verify_surgery_claims

inst = SurgeryInstance(PreorderSpec.linear(6), x0=3, a=frozenset({2, 5}), b=frozenset({1}),
                       zip=((5, 1),))
p1 = surgery(inst)
print("ranks before:", inst.base.ranks())
print("ranks after: ", p1.ranks())
print("strict segment ideal after:", seg_ideal(p1).to_json()["members"])
for claim in verify_surgery_claims(inst, p1):
    print(json.dumps(claim))
