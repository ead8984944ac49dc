//! Lower-star filtrations and Z/2 persistent homology.
//!
//! Every cell of a valued complex receives the minimum value of the top cells
//! containing it, so each sublevel set is a subcomplex. Cells are ordered by
//! `(value, dim, id)` and the boundary matrix is reduced column by column
//! (with clearing). Pairs of equal value are kept internally but hidden from
//! the default diagram.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::approximation::PCApprox;
use crate::cwcomplex::{CellId, RectComplex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PersistenceError {
    #[error("the approximation is incomplete (cannot decide); no filtration exists")]
    IncompleteApproximation,
    #[error("persistence needs the cell complex; use the complex-backed approximation")]
    MissingComplex,
    #[error("top cell {0} has no value")]
    UnvaluedCell(usize),
    #[error("lower-star persistence needs scalar values, got {0} components; export a multifiltration instead")]
    VectorValued(usize),
    #[error("multifiltration export needs at least two value components; use lower_star for scalar functions")]
    ScalarValued,
    #[error("cell {0} has a non-finite value")]
    NonFiniteValue(usize),
    #[error("cell {cell} lists unknown face {face}")]
    UnknownFace { cell: usize, face: usize },
    #[error("cell id {0} appears twice")]
    DuplicateCell(usize),
    #[error("face {face} of cell {cell} does not precede it in the filtration")]
    NonMonotoneFiltration { cell: usize, face: usize },
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
}

/// One cell of a filtration; `boundary` holds cell ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredCell {
    pub id: usize,
    pub dim: usize,
    pub value: f64,
    pub boundary: Vec<usize>,
}

/// Cells in filtration order: by value, then dimension, then id.
#[derive(Debug, Clone)]
pub struct Filtration {
    cells: Vec<FilteredCell>,
    position: HashMap<usize, usize>,
}

impl Filtration {
    pub fn new(mut cells: Vec<FilteredCell>) -> Result<Self, PersistenceError> {
        if let Some(c) = cells.iter().find(|c| !c.value.is_finite()) {
            return Err(PersistenceError::NonFiniteValue(c.id));
        }
        cells.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.dim.cmp(&b.dim))
                .then(a.id.cmp(&b.id))
        });
        let mut position = HashMap::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if position.insert(c.id, i).is_some() {
                return Err(PersistenceError::DuplicateCell(c.id));
            }
        }
        for c in &cells {
            if let Some(&face) = c.boundary.iter().find(|f| !position.contains_key(f)) {
                return Err(PersistenceError::UnknownFace { cell: c.id, face });
            }
        }
        Ok(Filtration { cells, position })
    }

    pub fn cells(&self) -> &[FilteredCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn value_of(&self, id: usize) -> Option<f64> {
        self.position.get(&id).map(|&i| self.cells[i].value)
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    /// Boundary columns in filtration positions, each sorted ascending.
    fn columns(&self) -> Result<Vec<Vec<usize>>, PersistenceError> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut col: Vec<usize> = c.boundary.iter().map(|f| self.position[f]).collect();
                col.sort_unstable();
                match col.last() {
                    Some(&last) if last >= i => Err(PersistenceError::NonMonotoneFiltration {
                        cell: c.id,
                        face: self.cells[last].id,
                    }),
                    _ => Ok(col),
                }
            })
            .collect()
    }
}

/// Componentwise lower-star values of every live cell, indexed by id.
fn star_values(complex: &RectComplex) -> Result<Vec<Option<Vec<f64>>>, PersistenceError> {
    let d = complex.ambient_dim();
    let mut values: Vec<Option<Vec<f64>>> = vec![None; complex.id_bound()];
    let mut by_dim: Vec<Vec<CellId>> = vec![Vec::new(); d + 1];
    for (id, rect) in complex.cells() {
        by_dim[rect.dim()].push(id);
    }
    for (id, rect) in complex.top_cells() {
        let v = rect.value.clone().ok_or(PersistenceError::UnvaluedCell(id.0))?;
        values[id.0] = Some(v);
    }
    // each coface already carries the minimum over its own top cofaces
    for k in (0..d).rev() {
        for &id in &by_dim[k] {
            let mut acc: Option<Vec<f64>> = None;
            for co in complex.coboundary(id).expect("live id") {
                let v = values[co.0].as_ref().expect("coface valued first");
                match &mut acc {
                    None => acc = Some(v.clone()),
                    Some(a) => a.iter_mut().zip(v).for_each(|(a, &b)| *a = a.min(b)),
                }
            }
            values[id.0] = acc;
        }
    }
    Ok(values)
}

/// Lower-star filtration of a complex whose top cells carry scalar values.
pub fn lower_star_complex(complex: &RectComplex) -> Result<Filtration, PersistenceError> {
    let values = star_values(complex)?;
    let cells = complex
        .cells()
        .map(|(id, rect)| {
            let v = values[id.0].as_ref().ok_or(PersistenceError::UnvaluedCell(id.0))?;
            if v.len() != 1 {
                return Err(PersistenceError::VectorValued(v.len()));
            }
            Ok(FilteredCell {
                id: id.0,
                dim: rect.dim(),
                value: v[0],
                boundary: complex.boundary(id).expect("live id").iter().map(|c| c.0).collect(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Filtration::new(cells)
}

pub fn lower_star(approx: &PCApprox) -> Result<Filtration, PersistenceError> {
    if !approx.is_complete() {
        return Err(PersistenceError::IncompleteApproximation);
    }
    let m = approx.function().output_dim();
    if m != 1 {
        return Err(PersistenceError::VectorValued(m));
    }
    lower_star_complex(approx.complex().ok_or(PersistenceError::MissingComplex)?)
}

/// Writes the complex dump with componentwise lower-star vector values on
/// every cell, for use by multiparameter tools.
pub fn export_multifiltration<W: Write>(approx: &PCApprox, out: W) -> Result<(), PersistenceError> {
    if !approx.is_complete() {
        return Err(PersistenceError::IncompleteApproximation);
    }
    if approx.function().output_dim() < 2 {
        return Err(PersistenceError::ScalarValued);
    }
    let mut complex = approx.complex().ok_or(PersistenceError::MissingComplex)?.clone();
    for (id, v) in star_values(&complex)?.into_iter().enumerate() {
        if let Some(v) = v {
            complex.set_value(CellId(id), v).expect("live id");
        }
    }
    complex
        .write_jsonl(out)
        .map_err(|e| PersistenceError::MalformedDiagram(e.to_string()))
}

/// A point of a persistence diagram; `death` is `+∞` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub dim: usize,
    pub birth: f64,
    #[serde(serialize_with = "write_death", deserialize_with = "read_death")]
    pub death: f64,
}

impl DiagramPoint {
    pub fn new(dim: usize, birth: f64, death: f64) -> Self {
        DiagramPoint { dim, birth, death }
    }

    pub fn essential(dim: usize, birth: f64) -> Self {
        DiagramPoint::new(dim, birth, f64::INFINITY)
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

fn write_death<S: Serializer>(death: &f64, s: S) -> Result<S::Ok, S::Error> {
    if death.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*death)
    }
}

fn read_death<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    struct Death;
    impl Visitor<'_> for Death {
        type Value = f64;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or \"inf\"")
        }
        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" | "Infinity" => Ok(f64::INFINITY),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }
    d.deserialize_any(Death)
}

/// Multiset of `(dim, birth, death)` points, kept sorted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn new(mut points: Vec<DiagramPoint>) -> Self {
        points.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        PersistenceDiagram { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &DiagramPoint> + '_ {
        self.points.iter().filter(move |p| p.dim == dim)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.points.iter().map(|p| p.dim).max()
    }

    /// Essential class counts per dimension, i.e. the Betti numbers of the
    /// whole complex.
    pub fn betti(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_dim().map_or(0, |d| d + 1)];
        for p in self.points.iter().filter(|p| p.is_essential()) {
            out[p.dim] += 1;
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.points).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PersistenceError> {
        let points: Vec<DiagramPoint> =
            serde_json::from_str(text).map_err(|e| PersistenceError::MalformedDiagram(e.to_string()))?;
        Self::checked(points)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for p in &self.points {
            let death = if p.is_essential() { "inf".to_string() } else { p.death.to_string() };
            out.push_str(&format!("{},{},{}\n", p.dim, p.birth, death));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, PersistenceError> {
        let bad = |line: &str| PersistenceError::MalformedDiagram(format!("bad CSV row `{line}`"));
        let mut points = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "dim,birth,death" {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [dim, birth, death] = fields[..] else {
                return Err(bad(line));
            };
            let death = if death == "inf" { Ok(f64::INFINITY) } else { death.parse() };
            points.push(DiagramPoint::new(
                dim.parse().map_err(|_| bad(line))?,
                birth.parse().map_err(|_| bad(line))?,
                death.map_err(|_| bad(line))?,
            ));
        }
        Self::checked(points)
    }

    fn checked(points: Vec<DiagramPoint>) -> Result<Self, PersistenceError> {
        if let Some(p) = points
            .iter()
            .find(|p| !p.birth.is_finite() || p.death.is_nan() || p.death < p.birth)
        {
            return Err(PersistenceError::MalformedDiagram(format!(
                "point ({}, {}) in dimension {} is not a valid birth/death pair",
                p.birth, p.death, p.dim
            )));
        }
        Ok(Self::new(points))
    }
}

/// Removes finite points of persistence at most `eps`; essential classes stay.
pub fn filter_short(diagram: &PersistenceDiagram, eps: f64) -> PersistenceDiagram {
    PersistenceDiagram::new(
        diagram
            .points
            .iter()
            .filter(|p| p.is_essential() || p.persistence() > eps)
            .copied()
            .collect(),
    )
}

/// Diagram including zero-persistence pairs.
pub fn compute_persistence_full(filtration: &Filtration) -> Result<PersistenceDiagram, PersistenceError> {
    let cells = filtration.cells();
    let mut columns = filtration.columns()?;
    let n = cells.len();
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n];
    let mut is_birth = vec![false; n];
    let mut is_death = vec![false; n];
    let mut points = Vec::new();

    for dim in (0..=filtration.max_dim()).rev() {
        for j in (0..n).filter(|&j| cells[j].dim == dim) {
            if is_birth[j] {
                continue; // cleared: its column reduces to zero
            }
            while let Some(&low) = columns[j].last() {
                let Some(k) = pivot_owner[low] else { break };
                columns[j] = symmetric_difference(&columns[j], &columns[k]);
            }
            if let Some(&low) = columns[j].last() {
                pivot_owner[low] = Some(j);
                is_birth[low] = true;
                is_death[j] = true;
                columns[low].clear();
                points.push(DiagramPoint::new(cells[low].dim, cells[low].value, cells[j].value));
            }
        }
    }
    for (i, c) in cells.iter().enumerate() {
        if !is_birth[i] && !is_death[i] {
            points.push(DiagramPoint::essential(c.dim, c.value));
        }
    }
    Ok(PersistenceDiagram::new(points))
}

/// Diagram without zero-persistence pairs.
pub fn compute_persistence(filtration: &Filtration) -> Result<PersistenceDiagram, PersistenceError> {
    let full = compute_persistence_full(filtration)?;
    Ok(PersistenceDiagram::new(
        full.points.into_iter().filter(|p| p.death > p.birth).collect(),
    ))
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
