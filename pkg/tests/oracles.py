"""Brute-force reference computations.

Plain Python loops over lists; nothing here imports oodeval, so these stay
independent of the code under test.
"""

from fractions import Fraction


def flagged(s, t, rule="gt"):
    return s > t if rule == "gt" else s >= t


def confusion(id_scores, ood_scores, t, rule="gt"):
    tp = sum(flagged(s, t, rule) for s in ood_scores)
    fp = sum(flagged(s, t, rule) for s in id_scores)
    return {"tp": tp, "fn": len(ood_scores) - tp, "fp": fp, "tn": len(id_scores) - fp}


def rates(id_scores, ood_scores, t, rule="gt"):
    c = confusion(id_scores, ood_scores, t, rule)
    return c["fp"] / len(id_scores), c["fn"] / len(ood_scores)


def unique_grid(*sets):
    vals = sorted(set(v for s in sets for v in s) | {0.0, 1.0})
    return vals


def pairwise_auroc(id_scores, ood_scores):
    total = Fraction(0)
    for p in ood_scores:
        for q in id_scores:
            total += 1 if p > q else Fraction(1, 2) if p == q else 0
    return total / (len(id_scores) * len(ood_scores))


def pr_points(pos, neg):
    """(recall, precision) after each distinct cut, scanning descending score."""
    pts = [(0.0, 1.0)]
    for c in sorted(set(pos) | set(neg), reverse=True):
        tp = sum(1 for s in pos if s >= c)
        fp = sum(1 for s in neg if s >= c)
        pts.append((tp / len(pos), tp / (tp + fp)))
    return pts


def step_ap(pos, neg):
    pts = pr_points(pos, neg)
    return sum((r1 - r0) * p1 for (r0, _), (r1, p1) in zip(pts, pts[1:]))


def trapezoid_pr(pos, neg):
    pts = pr_points(pos, neg)
    return sum((r1 - r0) * (p0 + p1) / 2 for (r0, p0), (r1, p1) in zip(pts, pts[1:]))


def exact_step_area(values, t_lo=0.0, t_hi=1.0, rule="gt"):
    """Integral over [t_lo, t_hi] of the fraction of ``values`` flagged at t.

    Integrated piece by piece between consecutive breakpoints; the
    integrand is constant on each open piece, evaluated at the midpoint.
    """
    cuts = sorted(set([t_lo, t_hi] + [v for v in values if t_lo < v < t_hi]))
    area = 0.0
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        area += (b - a) * sum(flagged(v, mid, rule) for v in values) / len(values)
    return area


def best_over_grid(id_scores, ood_scores, objective, feasible=lambda fpr, fnr: True, rule="gt"):
    """Smallest grid threshold minimizing ``objective(fpr, fnr)`` among feasible ones."""
    best = None
    for t in unique_grid(id_scores, ood_scores):
        fpr, fnr = rates(id_scores, ood_scores, t, rule)
        if not feasible(fpr, fnr):
            continue
        v = objective(fpr, fnr)
        if best is None or v < best[0]:
            best = (v, t)
    return best
