"""
CSG next to the classical complexity measures
=============================================

Sweep the label noise, compute CSG and the Ho-Basu measures on each
dataset, then correlate every measure with the nearest-neighbour error
(N3) that stands in for a classifier's error rate here.
"""
import warnings

from csgmeasure import baseline_scores, csg_pipeline, generate_blobs, pearson, swap_labels
from csgmeasure.similarity import SimilarityParams

clean = generate_blobs(K=6, per_class=150, d=3, separation=4.0, seed=0)
rows = []
for t in range(1, 7):
    ds = clean if t == 1 else swap_labels(clean, range(t), frac=0.4, seed=t)
    csg = csg_pipeline(ds, SimilarityParams(M=100, seed=0)).csg
    with warnings.catch_warnings():
        # F1 flags degenerate class pairs; none are expected here
        warnings.simplefilter("ignore", RuntimeWarning)
        scores = baseline_scores(ds)
    rows.append((t, csg, scores))
    print(f"t={t}  csg={csg:.3f}  f1={scores.f1:.3f}  n1={scores.n1:.3f}  "
          f"n2={scores.n2:.3f}  n3={scores.n3:.3f}  t2={scores.t2:.1f}")

error = [s.n3 for _, _, s in rows]
for name, values in [("csg", [c for _, c, _ in rows]),
                     ("f1", [s.f1 for _, _, s in rows]),
                     ("n1", [s.n1 for _, _, s in rows]),
                     ("n2", [s.n2 for _, _, s in rows])]:
    r, p = pearson(values, error, permutations=5000, seed=0)
    print(f"{name:>3} vs 1-NN error: r = {r:+.3f} (permutation p = {p:.4f})")
