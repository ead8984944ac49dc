//! Rectangular CW-complexes with explicit boundary and coboundary links.
//!
//! A cell is an axis-aligned rectangle `[b_1,e_1] x ... x [b_d,e_d]`; its
//! dimension is the number of axes with `b_i < e_i`. Each cell stores the ids
//! of its primary faces (one dimension lower) and of its primary cofaces.
//! Cells are subdivided in place; a subdivided cell is tombstoned and its id
//! is never reused.
//!
//! Periodic axes identify the two end hyperplanes of the domain. A degenerate
//! coordinate lying on the upper end of a periodic axis is always stored as
//! the lower end, so identified cells share a single id.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::IntervalBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("cell {0} is not present in the complex")]
    CellAbsent(CellId),
    #[error("cut {cut} is not interior to [{lo}, {hi}] on axis {axis}")]
    CutOutsideInterior { axis: usize, cut: f64, lo: f64, hi: f64 },
    #[error("axis {0} of the domain is degenerate or too narrow to split")]
    DegenerateAxis(usize),
    #[error("axis {axis} out of range for ambient dimension {ambient}")]
    AxisOutOfRange { axis: usize, ambient: usize },
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Product of closed intervals, optionally carrying a value in `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rectangle {
    pub axes: Vec<(f64, f64)>,
    pub value: Option<Vec<f64>>,
}

impl Rectangle {
    pub fn new(axes: Vec<(f64, f64)>) -> Self {
        Rectangle { axes, value: None }
    }

    /// Number of nondegenerate factors.
    pub fn dim(&self) -> usize {
        self.axes.iter().filter(|(b, e)| b < e).count()
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.axes
            .iter()
            .map(|&(b, e)| crate::interval::Interval::new(b, e).map(|i| i.midpt()).unwrap_or(b))
            .collect()
    }

    pub fn to_box(&self) -> IntervalBox {
        IntervalBox::from_bounds(&self.axes).expect("rectangle axes are ordered and finite")
    }

    /// Lebesgue measure of the nondegenerate factors.
    pub fn volume(&self) -> f64 {
        self.axes.iter().map(|(b, e)| e - b).product()
    }
}

#[derive(Debug, Clone)]
struct Cell {
    rect: Rectangle,
    boundary: Vec<CellId>,
    coboundary: Vec<CellId>,
}

/// Rectangular CW-complex over a box domain.
#[derive(Debug, Clone)]
pub struct RectComplex {
    cells: Vec<Option<Cell>>,
    domain: Vec<(f64, f64)>,
    periodic: Vec<bool>,
    live: usize,
}

/// One line of the JSON-lines complex dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub id: usize,
    pub dim: usize,
    pub axes: Vec<[f64; 2]>,
    pub value: Option<Vec<f64>>,
    pub boundary: Vec<usize>,
}

impl RectComplex {
    /// Closed box with all of its faces. Periodic axes are pre-split at the
    /// midpoint so that each has two top cells, and their end faces are
    /// identified.
    pub fn from_box(domain: &IntervalBox, periodic: &[bool]) -> Result<Self, ComplexError> {
        let n = domain.dim();
        if periodic.len() > n {
            return Err(ComplexError::AxisOutOfRange {
                axis: periodic.len() - 1,
                ambient: n,
            });
        }
        let periodic: Vec<bool> = (0..n).map(|i| periodic.get(i).copied().unwrap_or(false)).collect();
        // per axis: list of (lo, hi) elements, vertices first
        let mut elements: Vec<Vec<(f64, f64)>> = Vec::with_capacity(n);
        for (axis, c) in domain.components().iter().enumerate() {
            let (lo, hi) = (c.lo(), c.hi());
            if lo >= hi {
                return Err(ComplexError::DegenerateAxis(axis));
            }
            if periodic[axis] {
                let m = c.midpt();
                if !(lo < m && m < hi) {
                    return Err(ComplexError::DegenerateAxis(axis));
                }
                elements.push(vec![(lo, lo), (m, m), (lo, m), (m, hi)]);
            } else {
                elements.push(vec![(lo, lo), (hi, hi), (lo, hi)]);
            }
        }
        let mut complex = RectComplex {
            cells: Vec::new(),
            domain: domain.components().iter().map(|c| (c.lo(), c.hi())).collect(),
            periodic,
        live: 0,
        };

        // every combination of per-axis elements, ordered by dimension
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for els in &elements {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    (0..els.len()).map(move |k| {
                        let mut c = c.clone();
                        c.push(k);
                        c
                    })
                })
                .collect();
        }
        let rect_of = |combo: &[usize]| -> Vec<(f64, f64)> {
            combo.iter().enumerate().map(|(axis, &k)| elements[axis][k]).collect()
        };
        combos.sort_by_key(|c| Rectangle::new(rect_of(c)).dim());

        let mut index: HashMap<Vec<u64>, CellId> = HashMap::new();
        let key = |axes: &[(f64, f64)]| -> Vec<u64> {
            axes.iter().flat_map(|(b, e)| [b.to_bits(), e.to_bits()]).collect()
        };
        for combo in &combos {
            let axes = rect_of(combo);
            let id = complex.push(Rectangle::new(axes.clone()));
            index.insert(key(&axes), id);
        }
        for combo in &combos {
            let axes = rect_of(combo);
            let id = index[&key(&axes)];
            for axis in 0..n {
                let (b, e) = axes[axis];
                if b == e {
                    continue;
                }
                for end in [b, e] {
                    let mut face = axes.clone();
                    let c = complex.canonical(axis, end);
                    face[axis] = (c, c);
                    let fid = index[&key(&face)];
                    complex.link(id, fid);
                }
            }
        }
        Ok(complex)
    }

    fn push(&mut self, rect: Rectangle) -> CellId {
        let id = CellId(self.cells.len());
        self.cells.push(Some(Cell {
            rect,
            boundary: Vec::new(),
            coboundary: Vec::new(),
        }));
        self.live += 1;
        id
    }

    fn remove(&mut self, id: CellId) {
        if self.cells[id.0].take().is_some() {
            self.live -= 1;
        }
    }

    fn get(&self, id: CellId) -> Result<&Cell, ComplexError> {
        self.cells
            .get(id.0)
            .and_then(Option::as_ref)
            .ok_or(ComplexError::CellAbsent(id))
    }

    fn get_mut(&mut self, id: CellId) -> &mut Cell {
        self.cells[id.0].as_mut().expect("live cell")
    }

    /// Adds `face` to the boundary of `cell` and `cell` to the coboundary of `face`.
    fn link(&mut self, cell: CellId, face: CellId) {
        let c = self.get_mut(cell);
        if !c.boundary.contains(&face) {
            c.boundary.push(face);
        }
        let f = self.get_mut(face);
        if !f.coboundary.contains(&cell) {
            f.coboundary.push(cell);
        }
    }

    fn canonical(&self, axis: usize, coord: f64) -> f64 {
        if self.periodic[axis] && coord == self.domain[axis].1 {
            self.domain[axis].0
        } else {
            coord
        }
    }

    /// Whether the (canonical) point coordinate `p` lies in `[a, b]` on `axis`,
    /// honouring periodic identification.
    fn coord_in(&self, axis: usize, p: f64, (a, b): (f64, f64)) -> bool {
        if a <= p && p <= b {
            return true;
        }
        if !self.periodic[axis] {
            return false;
        }
        let (lo, hi) = self.domain[axis];
        (p == lo && b == hi) || (p == hi && a == lo)
    }

    /// Geometric containment of `small` in `big`.
    pub fn rect_within(&self, small: &Rectangle, big: &Rectangle) -> bool {
        small.axes.iter().zip(&big.axes).enumerate().all(|(axis, (&(c, d), &ab))| {
            if c == d {
                self.coord_in(axis, c, ab)
            } else {
                ab.0 <= c && d <= ab.1
            }
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// One past the largest id ever issued.
    pub fn id_bound(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.get(id).is_ok()
    }

    pub fn rect(&self, id: CellId) -> Result<&Rectangle, ComplexError> {
        self.get(id).map(|c| &c.rect)
    }

    pub fn boundary(&self, id: CellId) -> Result<&[CellId], ComplexError> {
        self.get(id).map(|c| c.boundary.as_slice())
    }

    pub fn coboundary(&self, id: CellId) -> Result<&[CellId], ComplexError> {
        self.get(id).map(|c| c.coboundary.as_slice())
    }

    pub fn dim(&self, id: CellId) -> Result<usize, ComplexError> {
        self.rect(id).map(Rectangle::dim)
    }

    pub fn set_value(&mut self, id: CellId, value: Vec<f64>) -> Result<(), ComplexError> {
        self.get(id)?;
        self.get_mut(id).rect.value = Some(value);
        Ok(())
    }

    /// Live cell ids in increasing order.
    pub fn ids(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| CellId(i))
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellId, &Rectangle)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (CellId(i), &c.rect)))
    }

    pub fn top_cells(&self) -> impl Iterator<Item = (CellId, &Rectangle)> + '_ {
        let d = self.ambient_dim();
        self.cells().filter(move |(_, r)| r.dim() == d)
    }

    /// Number of live cells in each dimension `0..=d`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.ambient_dim() + 1];
        for (_, r) in self.cells() {
            counts[r.dim()] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts_by_dim()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Splits `id` on `axis` at `cut` into `(R1, R2, R3)`: the lower half,
    /// the upper half, and their shared face. Boundary cells crossing the
    /// cut are split recursively and all links are rewired.
    pub fn subdivide_one(
        &mut self,
        id: CellId,
        axis: usize,
        cut: f64,
    ) -> Result<(CellId, CellId, CellId), ComplexError> {
        let ambient = self.ambient_dim();
        if axis >= ambient {
            return Err(ComplexError::AxisOutOfRange { axis, ambient });
        }
        let cell = self.get(id)?;
        let (lo, hi) = cell.rect.axes[axis];
        if !(lo < cut && cut < hi) {
            return Err(ComplexError::CutOutsideInterior { axis, cut, lo, hi });
        }
        let rect = cell.rect.clone();
        let boundary = cell.boundary.clone();
        let coboundary = cell.coboundary.clone();

        let crosses = |r: &Rectangle| {
            let (c, d) = r.axes[axis];
            c < cut && cut < d
        };
        let (split, keep): (Vec<CellId>, Vec<CellId>) = boundary
            .iter()
            .partition(|&&s| crosses(&self.get(s).expect("boundary cell").rect));

        let mut halves = [rect.clone(), rect.clone(), rect];
        halves[0].axes[axis] = (lo, cut);
        halves[1].axes[axis] = (cut, hi);
        halves[2].axes[axis] = (cut, cut);
        for h in &mut halves {
            h.value = None;
        }
        let [h1, h2, h3] = halves;
        let r1 = self.push(h1);
        let r2 = self.push(h2);
        let r3 = self.push(h3);
        self.link(r1, r3);
        self.link(r2, r3);

        for &a in &keep {
            let a_rect = self.get(a).expect("boundary cell").rect.clone();
            let target = if self.rect_within(&a_rect, &self.get(r1)?.rect) {
                r1
            } else {
                r2
            };
            debug_assert!(self.rect_within(&a_rect, &self.get(target)?.rect));
            let cob = &mut self.get_mut(a).coboundary;
            cob.retain(|&c| c != id);
            self.link(target, a);

            // A piece ending exactly on the cut already carries the faces
            // that bound R3 there.
            let (c, d) = a_rect.axes[axis];
            if c < d && (c == cut || d == cut) {
                let on_cut: Vec<CellId> = self
                    .get(a)?
                    .boundary
                    .iter()
                    .copied()
                    .filter(|&t| self.get(t).map(|t| t.rect.axes[axis] == (cut, cut)).unwrap_or(false))
                    .collect();
                for t in on_cut {
                    self.link(r3, t);
                }
            }
        }

        for &b in &coboundary {
            let bd = &mut self.get_mut(b).boundary;
            bd.retain(|&c| c != id);
            self.link(b, r1);
            self.link(b, r2);
        }

        for &s in &split {
            self.get_mut(s).coboundary.retain(|&c| c != id);
        }
        self.remove(id);

        for s in split {
            let (s1, s2, s3) = self.subdivide_one(s, axis, cut)?;
            self.link(r1, s1);
            self.link(r2, s2);
            self.link(r3, s3);
        }
        Ok((r1, r2, r3))
    }

    /// Splits `id` in every coordinate direction at `cuts`, returning the
    /// `2^k` resulting cells of the same dimension (k = cell dimension).
    /// Degenerate axes of the cell are skipped.
    pub fn subdivide_all(&mut self, id: CellId, cuts: &[f64]) -> Result<Vec<CellId>, ComplexError> {
        let ambient = self.ambient_dim();
        if cuts.len() != ambient {
            return Err(ComplexError::DimensionMismatch {
                expected: ambient,
                got: cuts.len(),
            });
        }
        let rect = self.rect(id)?;
        for (axis, (&(lo, hi), &cut)) in rect.axes.iter().zip(cuts).enumerate() {
            if lo < hi && !(lo < cut && cut < hi) {
                return Err(ComplexError::CutOutsideInterior { axis, cut, lo, hi });
            }
        }
        let axes: Vec<usize> = (0..ambient).filter(|&a| rect.axes[a].0 < rect.axes[a].1).collect();
        let mut current = vec![id];
        for axis in axes {
            let mut next = Vec::with_capacity(current.len() * 2);
            for r in current {
                let (r1, r2, _) = self.subdivide_one(r, axis, cuts[axis])?;
                next.push(r1);
                next.push(r2);
            }
            current = next;
        }
        Ok(current)
    }

    /// All top-dimensional cells having `id` in their closure.
    pub fn top_cofaces(&self, id: CellId) -> Result<Vec<CellId>, ComplexError> {
        let d = self.ambient_dim();
        let start = self.get(id)?;
        if start.rect.dim() == d {
            return Ok(vec![id]);
        }
        let mut seen = vec![false; self.cells.len()];
        let mut queue: VecDeque<CellId> = start.coboundary.iter().copied().collect();
        let mut out = Vec::new();
        while let Some(c) = queue.pop_front() {
            if std::mem::replace(&mut seen[c.0], true) {
                continue;
            }
            let cell = self.get(c)?;
            if cell.rect.dim() == d {
                out.push(c);
            } else {
                queue.extend(cell.coboundary.iter().copied());
            }
        }
        out.sort();
        Ok(out)
    }

    /// Checks link symmetry, face geometry and `∂∘∂ = 0` over Z/2.
    pub fn check_integrity(&self) -> Result<(), String> {
        for (id, rect) in self.cells() {
            let cell = self.get(id).unwrap();
            let mut parity: HashMap<CellId, usize> = HashMap::new();
            for &f in &cell.boundary {
                let face = self.get(f).map_err(|e| format!("{id}: {e}"))?;
                if !face.coboundary.contains(&id) {
                    return Err(format!("{f} is in the boundary of {id} but not vice versa"));
                }
                if face.rect.dim() + 1 != rect.dim() {
                    return Err(format!("{f} has the wrong dimension to bound {id}"));
                }
                if !self.rect_within(&face.rect, rect) {
                    return Err(format!("{f} is not geometrically inside {id}"));
                }
                for &g in &face.boundary {
                    *parity.entry(g).or_default() += 1;
                }
            }
            if let Some((g, _)) = parity.iter().find(|(_, &n)| n % 2 == 1) {
                return Err(format!("boundary of boundary of {id} contains {g}"));
            }
            for &c in &cell.coboundary {
                let co = self.get(c).map_err(|e| format!("{id}: {e}"))?;
                if !co.boundary.contains(&id) {
                    return Err(format!("{c} is in the coboundary of {id} but not vice versa"));
                }
            }
            let mut sorted = cell.boundary.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != cell.boundary.len() {
                return Err(format!("duplicate boundary entries in {id}"));
            }
        }
        Ok(())
    }

    pub fn record(&self, id: CellId) -> Result<CellRecord, ComplexError> {
        let cell = self.get(id)?;
        let mut boundary: Vec<usize> = cell.boundary.iter().map(|c| c.0).collect();
        boundary.sort_unstable();
        Ok(CellRecord {
            id: id.0,
            dim: cell.rect.dim(),
            axes: cell.rect.axes.iter().map(|&(b, e)| [b, e]).collect(),
            value: cell.rect.value.clone(),
            boundary,
        })
    }

    /// Writes one JSON record per live cell, in id order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for id in self.ids() {
            let rec = self.record(id).expect("live id");
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> IntervalBox {
        IntervalBox::from_bounds(&vec![(0.0, 1.0); n]).unwrap()
    }

    #[test]
    fn closed_interval_and_square() {
        let c = RectComplex::from_box(&unit(1), &[]).unwrap();
        assert_eq!(c.counts_by_dim(), vec![2, 1]);
        let c = RectComplex::from_box(&unit(2), &[false, false]).unwrap();
        assert_eq!(c.counts_by_dim(), vec![4, 4, 1]);
        assert_eq!(c.len(), 9);
        c.check_integrity().unwrap();
        let c = RectComplex::from_box(&unit(3), &[]).unwrap();
        assert_eq!(c.len(), 27);
        assert_eq!(c.euler_characteristic(), 1);
        c.check_integrity().unwrap();
    }

    #[test]
    fn periodic_interval_is_a_circle() {
        let c = RectComplex::from_box(&unit(1), &[true]).unwrap();
        assert_eq!(c.counts_by_dim(), vec![2, 2]);
        assert_eq!(c.euler_characteristic(), 0);
        c.check_integrity().unwrap();
        for (id, _) in c.top_cells() {
            assert_eq!(c.boundary(id).unwrap().len(), 2);
        }
    }

    #[test]
    fn periodic_square_is_a_torus() {
        let c = RectComplex::from_box(&unit(2), &[true, true]).unwrap();
        assert_eq!(c.counts_by_dim(), vec![4, 8, 4]);
        assert_eq!(c.euler_characteristic(), 0);
        c.check_integrity().unwrap();
    }

    #[test]
    fn degenerate_domain_rejected() {
        let b = IntervalBox::from_bounds(&[(0.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(
            RectComplex::from_box(&b, &[]).unwrap_err(),
            ComplexError::DegenerateAxis(1)
        );
    }

    #[test]
    fn split_edge() {
        let mut c = RectComplex::from_box(&unit(1), &[]).unwrap();
        let (top, _) = c.top_cells().next().unwrap();
        let (r1, r2, r3) = c.subdivide_one(top, 0, 0.5).unwrap();
        assert_eq!(c.counts_by_dim(), vec![3, 2]);
        assert!(!c.contains(top));
        assert_eq!(c.rect(r1).unwrap().axes, vec![(0.0, 0.5)]);
        assert_eq!(c.rect(r2).unwrap().axes, vec![(0.5, 1.0)]);
        assert_eq!(c.top_cofaces(r3).unwrap(), vec![r1, r2]);
        c.check_integrity().unwrap();
    }

    #[test]
    fn cut_must_be_interior() {
        let mut c = RectComplex::from_box(&unit(1), &[]).unwrap();
        let (top, _) = c.top_cells().next().unwrap();
        assert!(matches!(
            c.subdivide_one(top, 0, 0.0),
            Err(ComplexError::CutOutsideInterior { .. })
        ));
        assert!(matches!(
            c.subdivide_one(CellId(99), 0, 0.5),
            Err(ComplexError::CellAbsent(CellId(99)))
        ));
    }

    #[test]
    fn split_square_one_direction() {
        let mut c = RectComplex::from_box(&unit(2), &[]).unwrap();
        let (top, _) = c.top_cells().next().unwrap();
        c.subdivide_one(top, 0, 0.5).unwrap();
        // 4+2 vertices, 4-2+2*2+1 edges, 2 squares
        assert_eq!(c.counts_by_dim(), vec![6, 7, 2]);
        c.check_integrity().unwrap();
    }

    #[test]
    fn split_square_all_directions() {
        let mut c = RectComplex::from_box(&unit(2), &[]).unwrap();
        let (top, _) = c.top_cells().next().unwrap();
        let tops = c.subdivide_all(top, &[0.5, 0.5]).unwrap();
        assert_eq!(tops.len(), 4);
        assert_eq!(c.counts_by_dim(), vec![9, 12, 4]);
        assert_eq!(c.len(), 25);
        c.check_integrity().unwrap();

        let find_vertex = |x: f64, y: f64| {
            c.cells()
                .find(|(_, r)| r.axes == vec![(x, x), (y, y)])
                .map(|(id, _)| id)
                .unwrap()
        };
        assert_eq!(c.top_cofaces(find_vertex(0.0, 0.0)).unwrap().len(), 1);
        assert_eq!(c.top_cofaces(find_vertex(0.5, 0.5)).unwrap().len(), 4);
        assert_eq!(c.top_cofaces(find_vertex(0.5, 0.0)).unwrap().len(), 2);
    }

    #[test]
    fn neighbour_split_then_aligned_split() {
        // Two squares side by side share an edge; refining one splits the
        // shared edge, and refining the other must reuse the new vertex.
        let b = IntervalBox::from_bounds(&[(0.0, 2.0), (0.0, 1.0)]).unwrap();
        let mut c = RectComplex::from_box(&b, &[]).unwrap();
        let (top, _) = c.top_cells().next().unwrap();
        let (left, right, _) = c.subdivide_one(top, 0, 1.0).unwrap();
        c.subdivide_all(left, &[0.5, 0.5]).unwrap();
        c.check_integrity().unwrap();
        c.subdivide_all(right, &[1.5, 0.5]).unwrap();
        c.check_integrity().unwrap();
        assert_eq!(c.counts_by_dim(), vec![15, 22, 8]);
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn periodic_refinement_keeps_identification() {
        let mut c = RectComplex::from_box(&unit(1), &[true]).unwrap();
        let tops: Vec<CellId> = c.top_cells().map(|(id, _)| id).collect();
        for t in tops {
            let m = c.rect(t).unwrap().midpoint();
            c.subdivide_all(t, &m).unwrap();
        }
        assert_eq!(c.counts_by_dim(), vec![4, 4]);
        c.check_integrity().unwrap();
        for (id, _) in c.cells().filter(|(_, r)| r.dim() == 0) {
            assert_eq!(c.top_cofaces(id).unwrap().len(), 2);
        }
    }

    #[test]
    fn dump_is_json_lines() {
        let c = RectComplex::from_box(&unit(1), &[]).unwrap();
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let recs: Vec<CellRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[2].dim, 1);
        assert_eq!(recs[2].boundary, vec![0, 1]);
        assert!(text.starts_with(r#"{"id":0,"dim":0,"axes":[[0.0,0.0]],"value":null,"boundary":[]}"#));
    }
}
