//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigor_persist::{DiagramPoint, PersistenceDiagram};

pub const SEVEN_MINIMA: &str = "abs(sin(6*pi*x))/(1+x^2) + 3*cos(2*pi*x)/10";
pub const QUARTIC: &str = "2 - 25*x + 108*x^2 - 162*x^3 + 81*x^4";
pub const ACKLEY: &str = "20 + e - 20*exp(-0.2*sqrt(((45*x-15)^2 + (45*y-15)^2)/2)) \
                          - exp((cos(pi/2*(45*x-15)) + cos(pi/2*(45*y-15)))/2)";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn seven_minima(x: f64) -> f64 {
    use std::f64::consts::PI;
    (6.0 * PI * x).sin().abs() / (1.0 + x * x) + 0.3 * (2.0 * PI * x).cos()
}

/// Uniform samples in `[a, b]`, endpoints included.
pub fn samples(rng: &mut impl Rng, a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(a..=b)).collect();
    xs.push(a);
    xs.push(b);
    xs
}

struct UnionFind {
    parent: Vec<usize>,
    birth: Vec<f64>,
}

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
}

/// Zero-dimensional persistence of a graph filtered by vertex and edge
/// values (each edge no lower than its endpoints), by the elder rule.
/// Returns `(birth, death)` pairs with `death > birth`, plus one `(birth, ∞)`
/// per connected component.
pub fn union_find_persistence(vertex: &[f64], edges: &[(usize, usize, f64)]) -> Vec<(f64, f64)> {
    let mut uf = UnionFind {
        parent: (0..vertex.len()).collect(),
        birth: vertex.to_vec(),
    };
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2));
    let mut out = Vec::new();
    for e in order {
        let (u, v, t) = edges[e];
        let (ru, rv) = (uf.find(u), uf.find(v));
        if ru == rv {
            continue;
        }
        let (old, young) = if uf.birth[ru] <= uf.birth[rv] { (ru, rv) } else { (rv, ru) };
        if t > uf.birth[young] {
            out.push((uf.birth[young], t));
        }
        uf.parent[young] = old;
    }
    for i in 0..vertex.len() {
        if uf.find(i) == i {
            out.push((uf.birth[i], f64::INFINITY));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

/// Zero-dimensional persistence of the piecewise-linear interpolant of
/// equally spaced samples of `f` on `[a, b]`.
pub fn grid_persistence(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let vertex: Vec<f64> = (0..n).map(|i| f(a + (b - a) * i as f64 / (n - 1) as f64)).collect();
    let edges: Vec<(usize, usize, f64)> = (0..n - 1).map(|i| (i, i + 1, vertex[i].max(vertex[i + 1]))).collect();
    union_find_persistence(&vertex, &edges)
}

pub fn dim0_pairs(d: &PersistenceDiagram) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = d.in_dim(0).map(|p| (p.birth, p.death)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

fn linf(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn diag(p: &DiagramPoint) -> f64 {
    (p.death - p.birth) / 2.0
}

/// Enumerates every partial matching of finite single-dimension point sets;
/// unmatched points go to the diagonal. Calls `visit` with the cost list.
fn for_each_matching(a: &[DiagramPoint], b: &[DiagramPoint], visit: &mut impl FnMut(&[f64])) {
    fn go(
        i: usize,
        a: &[DiagramPoint],
        b: &[DiagramPoint],
        used: &mut Vec<bool>,
        costs: &mut Vec<f64>,
        visit: &mut impl FnMut(&[f64]),
    ) {
        if i == a.len() {
            let n = costs.len();
            for (j, q) in b.iter().enumerate() {
                if !used[j] {
                    costs.push(diag(q));
                }
            }
            visit(costs);
            costs.truncate(n);
            return;
        }
        costs.push(diag(&a[i]));
        go(i + 1, a, b, used, costs, visit);
        costs.pop();
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                costs.push(linf(&a[i], &b[j]));
                go(i + 1, a, b, used, costs, visit);
                costs.pop();
                used[j] = false;
            }
        }
    }
    go(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), visit);
}

/// Exhaustive bottleneck distance for finite diagrams in dimension 0.
pub fn brute_bottleneck(a: &[DiagramPoint], b: &[DiagramPoint]) -> f64 {
    let mut best = f64::INFINITY;
    for_each_matching(a, b, &mut |costs| {
        best = best.min(costs.iter().copied().fold(0.0, f64::max));
    });
    best
}

/// Exhaustive Wasserstein distance for finite diagrams in dimension 0.
pub fn brute_wasserstein(a: &[DiagramPoint], b: &[DiagramPoint], q: f64) -> f64 {
    let mut best = f64::INFINITY;
    for_each_matching(a, b, &mut |costs| {
        let mut terms: Vec<f64> = costs.iter().map(|c| c.powf(q)).collect();
        terms.sort_by(f64::total_cmp);
        best = best.min(terms.into_iter().sum());
    });
    best.powf(1.0 / q)
}

/// Random finite dimension-0 diagram; values on a coarse grid half the time,
/// to provoke ties.
pub fn random_points(rng: &mut impl Rng, max: usize) -> Vec<DiagramPoint> {
    let n = rng.gen_range(0..=max);
    let coarse = rng.gen_bool(0.5);
    (0..n)
        .map(|_| {
            let (b, l): (f64, f64) = if coarse {
                (rng.gen_range(0..8) as f64 / 4.0, rng.gen_range(0..8) as f64 / 4.0)
            } else {
                (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.5))
            };
            DiagramPoint::new(0, b, b + l)
        })
        .collect()
}
