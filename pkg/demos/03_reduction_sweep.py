"""
How small can a dataset get?
============================

Subsample every class of an overcomplete dataset and watch the CSG. It
stays flat while the classes are still well sampled and rises once the
density estimates run out of points.
"""
from csgmeasure import generate_blobs
from csgmeasure.reduction import sweep
from csgmeasure.similarity import SimilarityParams

ds = generate_blobs(K=10, per_class=5000, d=2, separation=6.0, seed=0)
ratios = [1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002]

result = sweep(ds, ratios, SimilarityParams(M=100, seed=0), repeats=3, seed=0)
print(result.to_csv())

full = result.points[0].csg_mean
for p in result.points:
    bar = "#" * int(round(40 * p.csg_mean / max(q.csg_mean for q in result.points)))
    flag = "  <- more than 50% above full size" if p.csg_mean > 1.5 * full else ""
    print(f"{p.count_per_class:5d}/class  {p.csg_mean:.3f} +- {p.csg_std:.3f}  {bar}{flag}")
