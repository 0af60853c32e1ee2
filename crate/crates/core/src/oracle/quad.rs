//! Gauss–Legendre panels in double-double and a globally adaptive driver.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::dd::Dd;

/// Nodes and weights of an `N`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussRule {
    nodes: Vec<Dd>,
    weights: Vec<Dd>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: Dd) -> (Dd, Dd) {
    let mut p0 = Dd::ONE;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = (x * p1).mul_f64(2.0 * kf + 1.0) - p0.mul_f64(kf);
        p0 = p1;
        p1 = p2 / Dd::from(kf + 1.0);
    }
    let dp = (x * p1 - p0).mul_f64(n as f64) / (x.sqr() - Dd::ONE);
    (p1, dp)
}

impl GaussRule {
    pub fn new(order: usize) -> GaussRule {
        assert!(order >= 2, "Gauss rule needs at least two nodes");
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for i in 0..order {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut x = Dd::from(guess);
            for _ in 0..100 {
                let (p, dp) = legendre(order, x);
                let step = p / dp;
                x = x - step;
                if step.hi.abs() < 1e-33 {
                    break;
                }
            }
            let (_, dp) = legendre(order, x);
            let w = Dd::from(2.0) / ((Dd::ONE - x.sqr()) * dp.sqr());
            nodes.push(x);
            weights.push(w);
        }
        GaussRule { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Dd] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Dd] {
        &self.weights
    }

    /// `(∫ f, ∫ |f|)` over `[a, b]`.
    pub fn apply<F: Fn(Dd) -> Dd>(&self, f: &F, a: Dd, b: Dd) -> (Dd, Dd) {
        let half = (b - a).ldexp(-1);
        let mid = a + half;
        let mut sum = Dd::ZERO;
        let mut abs = Dd::ZERO;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let fx = f(mid + half * *x);
            sum += *w * fx;
            abs += *w * fx.abs();
        }
        (sum * half, abs * half.abs())
    }
}

/// Outcome of an adaptive run over a list of breakpoints.
#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    pub value: Dd,
    pub abs_err: f64,
    pub panels: usize,
    pub converged: bool,
}

struct Segment {
    a: Dd,
    b: Dd,
    left: Dd,
    right: Dd,
    err: f64,
    splittable: bool,
}

#[derive(PartialEq)]
struct ByError(f64, usize);

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

const ROUNDOFF_FACTOR: f64 = 64.0 * Dd::EPSILON;

fn make_segment<F: Fn(Dd) -> Dd>(rule: &GaussRule, f: &F, a: Dd, b: Dd, whole: Dd) -> Segment {
    let mid = a + (b - a).ldexp(-1);
    let (left, labs) = rule.apply(f, a, mid);
    let (right, rabs) = rule.apply(f, mid, b);
    let diff = ((left + right) - whole).abs().to_f64();
    let floor = ROUNDOFF_FACTOR * (labs + rabs).to_f64();
    let narrow = (b - a).to_f64().abs() <= 1e-24 * a.to_f64().abs().max(b.to_f64().abs());
    Segment {
        a,
        b,
        left,
        right,
        err: diff.max(floor),
        splittable: diff > floor && !narrow,
    }
}

/// Integrates `f` over consecutive panels `[breaks[i], breaks[i+1]]`, bisecting
/// the panel with the largest error estimate until the summed estimate drops
/// below `target(value)` or `max_segments` is reached.
///
/// A panel's estimate is `|G(whole) - G(left) - G(right)|`, floored by the
/// rounding level of the double-double sum, and the refined value
/// `G(left) + G(right)` is what gets summed. Panels are summed in left-to-right
/// order, so the result does not depend on the order of refinement.
pub fn integrate_adaptive<F, T>(
    rule: &GaussRule,
    f: &F,
    breaks: &[Dd],
    target: T,
    max_segments: usize,
) -> Adaptive
where
    F: Fn(Dd) -> Dd,
    T: Fn(Dd) -> f64,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut segs: Vec<Segment> = Vec::with_capacity(breaks.len() * 4);
    let mut heap = BinaryHeap::new();
    let mut value = Dd::ZERO;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (whole, _) = rule.apply(f, w[0], w[1]);
        let seg = make_segment(rule, f, w[0], w[1], whole);
        value += seg.left + seg.right;
        err += seg.err;
        if seg.splittable {
            heap.push(ByError(seg.err, segs.len()));
        }
        segs.push(seg);
    }
    let mut converged = false;
    loop {
        if err <= target(value) {
            // Re-sum from scratch so that incremental drift cannot fake convergence.
            err = segs.iter().map(|s| s.err).sum();
            value = sum_in_order(&mut segs);
            if err <= target(value) {
                converged = true;
                break;
            }
        }
        if segs.len() >= max_segments {
            break;
        }
        let Some(ByError(_, idx)) = heap.pop() else {
            break;
        };
        let (a, b, left, right, old_err) = {
            let s = &segs[idx];
            (s.a, s.b, s.left, s.right, s.err)
        };
        let mid = a + (b - a).ldexp(-1);
        let lseg = make_segment(rule, f, a, mid, left);
        let rseg = make_segment(rule, f, mid, b, right);
        value = value - (left + right) + (lseg.left + lseg.right) + (rseg.left + rseg.right);
        err += lseg.err + rseg.err - old_err;
        segs[idx] = lseg;
        if segs[idx].splittable {
            heap.push(ByError(segs[idx].err, idx));
        }
        if rseg.splittable {
            heap.push(ByError(rseg.err, segs.len()));
        }
        segs.push(rseg);
    }
    let value = sum_in_order(&mut segs);
    let abs_err: f64 = segs.iter().map(|s| s.err).sum();
    let converged = converged || abs_err <= target(value);
    Adaptive {
        value,
        abs_err,
        panels: segs.len(),
        converged,
    }
}

fn sum_in_order(segs: &mut [Segment]) -> Dd {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&i, &j| segs[i].a.partial_cmp(&segs[j].a).unwrap_or(Ordering::Equal));
    order.iter().map(|&i| segs[i].left + segs[i].right).sum()
}
