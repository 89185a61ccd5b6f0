"""
A map of the classes
====================

Classical MDS on 1 - W places classes that are hard to tell apart close to
each other. Here classes 0-3 have swapped labels and huddle together,
while the clean classes stay on the outer ring.
"""
from csgmeasure import classical_mds, csg_pipeline, generate_blobs, swap_labels
from csgmeasure.mds import class_map_csv
from csgmeasure.similarity import SimilarityParams

ds = generate_blobs(K=8, per_class=400, d=2, separation=5.0, seed=1)
ds = swap_labels(ds, [0, 1, 2, 3], frac=0.5, seed=1)
report = csg_pipeline(ds, SimilarityParams(M=100, seed=0))

cmap = classical_mds(report.W, report.class_names)
print(class_map_csv(cmap))

# crude text scatter plot; overlapping classes share a cell
grid = [[" "] * 41 for _ in range(21)]
xy = cmap.coordinates
scale = max(abs(xy).max(), 1e-9)
for name, (x, y) in zip(cmap.class_names, xy):
    col = int(round(20 + 19 * x / scale))
    row = int(round(10 - 9 * y / scale))
    grid[row][col] = name[-1]
print("\n".join("".join(r) for r in grid))
print(f"stress = {cmap.stress:.3f}")
