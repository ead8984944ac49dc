//! Adaptive piecewise-constant approximation with certified sup-norm error.
//!
//! A cell `Q` is accepted once every component of the range enclosure
//! `f̂(Q)` lies within `eps` of its midpoint; the midpoint becomes `val(Q)`.
//! Otherwise `Q` is split at its midpoint in every direction. The resulting
//! function `□f` takes `val(Q)` in the interior of `Q` and the componentwise
//! minimum of all adjacent values on shared boundaries, so it is lower
//! semi-continuous and `|f - □f| <= eps` everywhere.
//!
//! Range enclosures of one generation of queued cells are evaluated in
//! parallel; all structural changes are committed sequentially in queue
//! order, so results do not depend on the thread count.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cwcomplex::{CellId, CellRecord, ComplexError, RectComplex, Rectangle};
use crate::expression::{EvalError, VectorFunction};
use crate::interval::{Interval, IntervalBox};

pub const DEFAULT_MAX_DEPTH: usize = 30;

/// Batches smaller than this are evaluated on the calling thread.
const PARALLEL_THRESHOLD: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("function has {function} variables but the domain has {domain} axes")]
    ArityMismatch { function: usize, domain: usize },
    #[error("cannot enclose the function on {cell:?}: {source}")]
    Evaluation {
        cell: Vec<(f64, f64)>,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("point {0:?} lies outside the domain")]
    PointOutsideDomain(Vec<f64>),
    #[error("the approximation is incomplete (cannot decide)")]
    IncompleteApproximation,
    #[error("expected a point of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    CannotDecide,
}

/// Which quantity [`PCApprox::epsilon`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Requested tolerance, met by every cell.
    Epsilon,
    /// Largest enclosure radius after a greedy run.
    ErrorBound,
}

/// Axis ranges of a top cell with its value.
type ValuedBox = (Vec<(f64, f64)>, Vec<f64>);

#[derive(Debug, Clone)]
enum Realization {
    Partition(Vec<Rectangle>),
    Complex(RectComplex),
}

/// Valued rectangular partition realizing `□f`.
#[derive(Debug, Clone)]
pub struct PCApprox {
    function: VectorFunction,
    domain: IntervalBox,
    periodic: Vec<bool>,
    epsilon: f64,
    bound: BoundKind,
    status: Status,
    realization: Realization,
    /// Valued top cells, for point queries.
    tops: Vec<ValuedBox>,
    unresolved: Vec<Rectangle>,
}

/// First record of an approximation dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpHeader {
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error_bound: Option<f64>,
    pub ambient_dim: usize,
    pub value_dim: usize,
    pub cell_counts: Vec<usize>,
    pub top_cells: usize,
    pub unresolved: usize,
}

impl PCApprox {
    fn new(
        function: VectorFunction,
        domain: IntervalBox,
        periodic: Vec<bool>,
        epsilon: f64,
        bound: BoundKind,
        status: Status,
        realization: Realization,
    ) -> Self {
        let collect = |r: &Rectangle| r.value.clone().map(|v| (r.axes.clone(), v));
        let (tops, unresolved) = match &realization {
            Realization::Partition(rects) => (
                rects.iter().filter_map(collect).collect(),
                rects.iter().filter(|r| r.value.is_none()).cloned().collect(),
            ),
            Realization::Complex(c) => (
                c.top_cells().filter_map(|(_, r)| collect(r)).collect(),
                c.top_cells()
                    .filter(|(_, r)| r.value.is_none())
                    .map(|(_, r)| r.clone())
                    .collect(),
            ),
        };
        PCApprox {
            function,
            domain,
            periodic,
            epsilon,
            bound,
            status,
            realization,
            tops,
            unresolved,
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    /// Certified bound on `|f - □f|` (the requested tolerance, or the greedy
    /// error bound).
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn bound_kind(&self) -> BoundKind {
        self.bound
    }

    pub fn function(&self) -> &VectorFunction {
        &self.function
    }

    pub fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn complex(&self) -> Option<&RectComplex> {
        match &self.realization {
            Realization::Complex(c) => Some(c),
            Realization::Partition(_) => None,
        }
    }

    /// Top rectangles of the partition, valued or not.
    pub fn top_rectangles(&self) -> Vec<Rectangle> {
        match &self.realization {
            Realization::Partition(r) => r.clone(),
            Realization::Complex(c) => c.top_cells().map(|(_, r)| r.clone()).collect(),
        }
    }

    pub fn top_count(&self) -> usize {
        self.tops.len() + self.unresolved.len()
    }

    /// Cells that could not meet the tolerance within the depth budget.
    pub fn unresolved(&self) -> &[Rectangle] {
        &self.unresolved
    }

    fn axis_contains(&self, axis: usize, x: f64, (b, e): (f64, f64)) -> bool {
        if b <= x && x <= e {
            return true;
        }
        if !self.periodic.get(axis).copied().unwrap_or(false) {
            return false;
        }
        let d = self.domain.get(axis);
        (x == d.lo() && e == d.hi()) || (x == d.hi() && b == d.lo())
    }

    /// Value of `□f` at `x`: the cell value in a cell interior, the
    /// componentwise minimum over all cells containing `x` otherwise.
    pub fn box_eval(&self, x: &[f64]) -> Result<Vec<f64>, ApproxError> {
        if x.len() != self.domain.dim() {
            return Err(ApproxError::DimensionMismatch {
                expected: self.domain.dim(),
                got: x.len(),
            });
        }
        if !self.domain.contains_point(x) {
            return Err(ApproxError::PointOutsideDomain(x.to_vec()));
        }
        if !self.is_complete() {
            return Err(ApproxError::IncompleteApproximation);
        }
        let mut out: Option<Vec<f64>> = None;
        for (axes, value) in &self.tops {
            let inside = axes
                .iter()
                .enumerate()
                .all(|(axis, &range)| self.axis_contains(axis, x[axis], range));
            if !inside {
                continue;
            }
            match &mut out {
                None => out = Some(value.clone()),
                Some(acc) => acc.iter_mut().zip(value).for_each(|(a, &v)| *a = a.min(v)),
            }
        }
        // the top cells cover the domain
        Ok(out.expect("point covered by some top cell"))
    }

    /// Writes the header record followed by one record per cell.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let cell_counts = match &self.realization {
            Realization::Complex(c) => c.counts_by_dim(),
            Realization::Partition(r) => {
                let mut counts = vec![0; self.domain.dim() + 1];
                counts[self.domain.dim()] = r.len();
                counts
            }
        };
        let (epsilon, error_bound) = match self.bound {
            BoundKind::Epsilon => (Some(self.epsilon), None),
            BoundKind::ErrorBound => (None, Some(self.epsilon)),
        };
        let header = DumpHeader {
            kind: "header".into(),
            status: self.status,
            epsilon,
            error_bound,
            ambient_dim: self.domain.dim(),
            value_dim: self.function.output_dim(),
            cell_counts,
            top_cells: self.top_count(),
            unresolved: self.unresolved.len(),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        match &self.realization {
            Realization::Complex(c) => c.write_jsonl(out),
            Realization::Partition(rects) => {
                for (id, r) in rects.iter().enumerate() {
                    let rec = CellRecord {
                        id,
                        dim: r.dim(),
                        axes: r.axes.iter().map(|&(b, e)| [b, e]).collect(),
                        value: r.value.clone(),
                        boundary: vec![],
                    };
                    serde_json::to_writer(&mut out, &rec)?;
                    out.write_all(b"\n")?;
                }
                Ok(())
            }
        }
    }
}

fn validate(f: &VectorFunction, domain: &IntervalBox, eps: f64) -> Result<(), ApproxError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ApproxError::InvalidEpsilon(eps));
    }
    if f.arity() != domain.dim() {
        return Err(ApproxError::ArityMismatch {
            function: f.arity(),
            domain: domain.dim(),
        });
    }
    Ok(())
}

fn enclose(f: &VectorFunction, axes: &[(f64, f64)]) -> Result<Vec<Interval>, ApproxError> {
    let region = IntervalBox::from_bounds(axes).expect("cell axes are valid intervals");
    f.eval_interval(&region).map_err(|source| ApproxError::Evaluation {
        cell: axes.to_vec(),
        source,
    })
}

/// Enclosures for a batch of cells, in input order.
fn enclose_all(f: &VectorFunction, cells: &[Vec<(f64, f64)>]) -> Result<Vec<Vec<Interval>>, ApproxError> {
    if cells.len() < PARALLEL_THRESHOLD {
        cells.iter().map(|a| enclose(f, a)).collect()
    } else {
        cells.par_iter().map(|a| enclose(f, a)).collect()
    }
}

/// Largest componentwise radius.
fn radius(enclosure: &[Interval]) -> f64 {
    enclosure.iter().map(Interval::rad).fold(0.0, f64::max)
}

fn midpoints(enclosure: &[Interval]) -> Vec<f64> {
    enclosure.iter().map(Interval::midpt).collect()
}

/// Midpoint cuts, or `None` when some axis is too narrow to split.
fn cuts(axes: &[(f64, f64)]) -> Option<Vec<f64>> {
    axes.iter()
        .map(|&(b, e)| {
            let m = Interval::new(b, e).ok()?.midpt();
            (b < m && m < e).then_some(m)
        })
        .collect()
}

/// Children of a box split at `cuts` in every direction, ordered as the
/// complex subdivision produces them (axis 0 splits first).
fn split_box(axes: &[(f64, f64)], cuts: &[f64]) -> Vec<Vec<(f64, f64)>> {
    let mut current = vec![axes.to_vec()];
    for (axis, &c) in cuts.iter().enumerate() {
        current = current
            .into_iter()
            .flat_map(|r| {
                let mut lo = r.clone();
                let mut hi = r;
                lo[axis].1 = c;
                hi[axis].0 = c;
                [lo, hi]
            })
            .collect();
    }
    current
}

/// Partition-only refinement: a FIFO queue of boxes, each accepted when
/// every component of its enclosure has radius at most `eps`.
pub fn approximate(
    f: &VectorFunction,
    domain: &IntervalBox,
    eps: f64,
    max_depth: usize,
) -> Result<PCApprox, ApproxError> {
    validate(f, domain, eps)?;
    let root: Vec<(f64, f64)> = domain.components().iter().map(|c| (c.lo(), c.hi())).collect();
    let mut queue: VecDeque<(Vec<(f64, f64)>, usize)> = VecDeque::from([(root, 0)]);
    let mut done: Vec<Rectangle> = Vec::new();
    let mut stuck = false;
    while !queue.is_empty() {
        let batch: Vec<(Vec<(f64, f64)>, usize)> = queue.drain(..).collect();
        let axes: Vec<Vec<(f64, f64)>> = batch.iter().map(|(a, _)| a.clone()).collect();
        let enclosures = enclose_all(f, &axes)?;
        for ((axes, depth), enc) in batch.into_iter().zip(enclosures) {
            if radius(&enc) <= eps {
                done.push(Rectangle {
                    axes,
                    value: Some(midpoints(&enc)),
                });
                continue;
            }
            match cuts(&axes).filter(|_| depth < max_depth) {
                Some(c) => queue.extend(split_box(&axes, &c).into_iter().map(|a| (a, depth + 1))),
                None => {
                    stuck = true;
                    done.push(Rectangle::new(axes));
                }
            }
        }
    }
    let status = if stuck { Status::CannotDecide } else { Status::Complete };
    Ok(PCApprox::new(
        f.clone(),
        domain.clone(),
        vec![false; domain.dim()],
        eps,
        BoundKind::Epsilon,
        status,
        Realization::Partition(done),
    ))
}

/// Same refinement as [`approximate`], carried out on a rectangular
/// CW-complex so that every face exists and is wired for filtration.
pub fn approximate_complex(
    f: &VectorFunction,
    domain: &IntervalBox,
    eps: f64,
    max_depth: usize,
    periodic: &[bool],
) -> Result<PCApprox, ApproxError> {
    validate(f, domain, eps)?;
    let mut complex = RectComplex::from_box(domain, periodic)?;
    let mut queue: VecDeque<(CellId, usize)> = complex.top_cells().map(|(id, _)| (id, 0)).collect();
    let mut stuck = false;
    while !queue.is_empty() {
        let batch: Vec<(CellId, usize)> = queue.drain(..).collect();
        let axes: Vec<Vec<(f64, f64)>> = batch
            .iter()
            .map(|&(id, _)| complex.rect(id).map(|r| r.axes.clone()))
            .collect::<Result<_, _>>()?;
        let enclosures = enclose_all(f, &axes)?;
        for (((id, depth), axes), enc) in batch.into_iter().zip(axes).zip(enclosures) {
            if radius(&enc) <= eps {
                complex.set_value(id, midpoints(&enc))?;
                continue;
            }
            match cuts(&axes).filter(|_| depth < max_depth) {
                Some(c) => {
                    let children = complex.subdivide_all(id, &c)?;
                    queue.extend(children.into_iter().map(|k| (k, depth + 1)));
                }
                None => stuck = true,
            }
        }
    }
    let status = if stuck { Status::CannotDecide } else { Status::Complete };
    Ok(PCApprox::new(
        f.clone(),
        domain.clone(),
        complex.periodic().to_vec(),
        eps,
        BoundKind::Epsilon,
        status,
        Realization::Complex(complex),
    ))
}

#[derive(Debug, Clone, Copy)]
struct Ranked {
    key: f64,
    seq: u64,
    id: CellId,
}

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    // max-heap on key; among equal keys the earlier insertion wins
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Result of a greedy run.
#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub approx: PCApprox,
    /// `max` over the final cells of the enclosure radius; bounds `|f - □f|`.
    pub error_bound: f64,
    /// Priority of each subdivided cell, in pop order.
    pub popped: Vec<f64>,
}

/// Repeatedly splits the cell whose enclosure has the largest radius, for
/// `budget` subdivisions, then values every cell by its enclosure midpoint.
pub fn greedy(
    f: &VectorFunction,
    domain: &IntervalBox,
    budget: usize,
    periodic: &[bool],
) -> Result<GreedyOutcome, ApproxError> {
    if f.arity() != domain.dim() {
        return Err(ApproxError::ArityMismatch {
            function: f.arity(),
            domain: domain.dim(),
        });
    }
    let mut complex = RectComplex::from_box(domain, periodic)?;
    let mut enclosures: HashMap<CellId, Vec<Interval>> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let tops: Vec<CellId> = complex.top_cells().map(|(id, _)| id).collect();
    let axes: Vec<Vec<(f64, f64)>> = tops.iter().map(|&id| complex.rect(id).unwrap().axes.clone()).collect();
    for (id, enc) in tops.into_iter().zip(enclose_all(f, &axes)?) {
        heap.push(Ranked {
            key: radius(&enc),
            seq,
            id,
        });
        seq += 1;
        enclosures.insert(id, enc);
    }

    let mut popped = Vec::with_capacity(budget);
    let mut frozen = Vec::new();
    while popped.len() < budget {
        let Some(top) = heap.pop() else { break };
        let axes = complex.rect(top.id)?.axes.clone();
        let Some(c) = cuts(&axes) else {
            frozen.push(top);
            continue;
        };
        popped.push(top.key);
        enclosures.remove(&top.id);
        let children = complex.subdivide_all(top.id, &c)?;
        let child_axes: Vec<Vec<(f64, f64)>> = children
            .iter()
            .map(|&id| complex.rect(id).map(|r| r.axes.clone()))
            .collect::<Result<_, _>>()?;
        for (id, enc) in children.into_iter().zip(enclose_all(f, &child_axes)?) {
            heap.push(Ranked {
                key: radius(&enc),
                seq,
                id,
            });
            seq += 1;
            enclosures.insert(id, enc);
        }
    }

    let mut error_bound = 0.0f64;
    for entry in heap.into_iter().chain(frozen) {
        let enc = &enclosures[&entry.id];
        error_bound = error_bound.max(radius(enc));
        complex.set_value(entry.id, midpoints(enc))?;
    }
    let approx = PCApprox::new(
        f.clone(),
        domain.clone(),
        complex.periodic().to_vec(),
        error_bound,
        BoundKind::ErrorBound,
        Status::Complete,
        Realization::Complex(complex),
    );
    Ok(GreedyOutcome {
        approx,
        error_bound,
        popped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> IntervalBox {
        IntervalBox::from_bounds(&vec![(0.0, 1.0); n]).unwrap()
    }

    fn identity() -> VectorFunction {
        VectorFunction::scalar("x", &["x"]).unwrap()
    }

    fn values(a: &PCApprox) -> Vec<f64> {
        let mut v: Vec<f64> = a.top_rectangles().iter().map(|r| r.value.as_ref().unwrap()[0]).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn constant_needs_one_cell() {
        let f = VectorFunction::scalar("3.5", &["x", "y"]).unwrap();
        let a = approximate(&f, &unit(2), 1e-9, 30).unwrap();
        assert_eq!(a.status(), Status::Complete);
        assert_eq!(a.top_count(), 1);
        assert_eq!(values(&a), vec![3.5]);

        let a = approximate_complex(&f, &unit(2), 0.1, 30, &[]).unwrap();
        assert_eq!(a.complex().unwrap().len(), 9);
        assert_eq!(values(&a), vec![3.5]);
    }

    #[test]
    fn identity_splits_once() {
        let a = approximate(&identity(), &unit(1), 0.3, 30).unwrap();
        assert_eq!(a.top_count(), 2);
        assert_eq!(values(&a), vec![0.25, 0.75]);

        let a = approximate_complex(&identity(), &unit(1), 0.3, 30, &[]).unwrap();
        assert_eq!(a.complex().unwrap().counts_by_dim(), vec![3, 2]);
        assert_eq!(values(&a), vec![0.25, 0.75]);
    }

    #[test]
    fn box_eval_takes_minimum_on_breakpoints() {
        let a = approximate(&identity(), &unit(1), 0.3, 30).unwrap();
        assert_eq!(a.box_eval(&[0.25]).unwrap(), vec![0.25]);
        assert_eq!(a.box_eval(&[0.5]).unwrap(), vec![0.25]);
        assert_eq!(a.box_eval(&[0.9]).unwrap(), vec![0.75]);
        assert!(matches!(a.box_eval(&[2.0]), Err(ApproxError::PointOutsideDomain(_))));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(
            approximate(&identity(), &unit(1), 0.0, 30).unwrap_err(),
            ApproxError::InvalidEpsilon(0.0)
        );
        assert!(matches!(
            approximate(&identity(), &unit(2), 0.1, 30),
            Err(ApproxError::ArityMismatch { .. })
        ));
        let f = VectorFunction::scalar("ln(x)", &["x"]).unwrap();
        assert!(matches!(
            approximate(&f, &unit(1), 0.1, 30),
            Err(ApproxError::Evaluation { .. })
        ));
    }

    #[test]
    fn oscillation_near_zero_cannot_be_decided() {
        let f = VectorFunction::scalar("sin(1/(x+1e-8))", &["x"]).unwrap();
        let a = approximate(&f, &unit(1), 0.5, 20).unwrap();
        assert_eq!(a.status(), Status::CannotDecide);
        assert!(!a.unresolved().is_empty());
        assert!(a.unresolved().iter().any(|r| r.axes[0].0 == 0.0));
        assert!(matches!(a.box_eval(&[0.5]), Err(ApproxError::IncompleteApproximation)));
    }

    #[test]
    fn greedy_on_identity() {
        let g = greedy(&identity(), &unit(1), 0, &[]).unwrap();
        assert_eq!(g.approx.top_count(), 1);
        assert_eq!(g.error_bound, 0.5);
        let g = greedy(&identity(), &unit(1), 1, &[]).unwrap();
        assert_eq!(g.approx.top_count(), 2);
        assert_eq!(g.error_bound, 0.25);
        let g = greedy(&identity(), &unit(1), 3, &[]).unwrap();
        assert_eq!(g.approx.top_count(), 4);
        assert_eq!(g.error_bound, 0.125);
        assert_eq!(g.popped, vec![0.5, 0.25, 0.25]);
    }

    #[test]
    fn vector_valued_acceptance_is_componentwise() {
        let f = VectorFunction::parse(&["x", "1 - x"], &["x"]).unwrap();
        let a = approximate(&f, &unit(1), 0.3, 30).unwrap();
        assert_eq!(a.top_count(), 2);
        assert_eq!(a.box_eval(&[0.5]).unwrap(), vec![0.25, 0.25]);
    }

    #[test]
    fn partition_and_complex_agree() {
        let f = VectorFunction::scalar("x*y - sin(3*x)", &["x", "y"]).unwrap();
        let p = approximate(&f, &unit(2), 0.05, 30).unwrap();
        let c = approximate_complex(&f, &unit(2), 0.05, 30, &[]).unwrap();
        assert_eq!(p.top_count(), c.top_count());
        let key = |r: &Rectangle| r.axes.iter().map(|(a, b)| (a.to_bits(), b.to_bits())).collect::<Vec<_>>();
        let mut a: Vec<_> = p.top_rectangles().iter().map(|r| (key(r), r.value.clone())).collect();
        let mut b: Vec<_> = c.top_rectangles().iter().map(|r| (key(r), r.value.clone())).collect();
        a.sort_by(|x, y| x.0.cmp(&y.0));
        b.sort_by(|x, y| x.0.cmp(&y.0));
        assert_eq!(a, b);
        c.complex().unwrap().check_integrity().unwrap();
    }

    #[test]
    fn dump_header_first() {
        let a = approximate_complex(&identity(), &unit(1), 0.3, 30, &[]).unwrap();
        let mut buf = Vec::new();
        a.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header: DumpHeader = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert_eq!(header.status, Status::Complete);
        assert_eq!(header.epsilon, Some(0.3));
        assert_eq!(header.cell_counts, vec![3, 2]);
        assert_eq!(lines.count(), 5);
    }
}
