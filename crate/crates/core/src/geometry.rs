//! Affine geometry of F_q^m: points, hyperplanes, flats and affine maps.
//!
//! Points are addressed by their canonical index `Σ code(x_i)·q^(m-i)`
//! (x1 most significant), so point sets are plain slices of indices.
//!
//! Canonical orders used by every search in this module:
//! - a normal vector is canonical when its first nonzero coordinate is 1;
//! - canonical normals are ordered by the position of that leading 1
//!   (x1 first), then lexicographically by element code;
//! - hyperplanes are ordered by normal, then by offset code.

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::{dot, null_space, rank, row_reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point set is empty")]
    EmptySet,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate or index out of range: {0}")]
    OutOfRange(String),
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("affine map matrix is singular")]
    NotInvertible,
    #[error("flat directions are linearly dependent")]
    DependentDirections,
    #[error("space F_{q}^{m} is too large to index")]
    TooLarge { q: u32, m: usize },
    #[error("hypothesis shape violated: |S| = {size} is not t·q^n = {t}·{q}^{n} with 0 < t < q and t·q^n < q^m")]
    HypothesisShape { size: usize, t: usize, q: u32, n: u32 },
    #[error("point set has {got} points, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// The affine space F_q^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    field: Field,
    m: usize,
    size: usize,
}

impl Space {
    /// Largest number of points a space may have.
    pub const MAX_POINTS: usize = 1 << 28;

    pub fn new(field: Field, m: usize) -> Result<Space, GeometryError> {
        let q = field.q();
        let size = (q as usize)
            .checked_pow(m as u32)
            .filter(|&s| s <= Self::MAX_POINTS)
            .ok_or(GeometryError::TooLarge { q, m })?;
        Ok(Space { field, m, size })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Number of points, q^m.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coords(&self, mut index: usize) -> Vec<u16> {
        let q = self.q() as usize;
        let mut out = vec![0u16; self.m];
        for slot in out.iter_mut().rev() {
            *slot = (index % q) as u16;
            index /= q;
        }
        out
    }

    pub fn index(&self, coords: &[u16]) -> usize {
        let q = self.q() as usize;
        coords.iter().fold(0, |acc, &c| acc * q + c as usize)
    }

    pub fn check_point(&self, coords: &[u16]) -> Result<(), GeometryError> {
        if coords.len() != self.m {
            return Err(GeometryError::DimensionMismatch { expected: self.m, got: coords.len() });
        }
        if let Some(&c) = coords.iter().find(|&&c| c as u32 >= self.q()) {
            return Err(GeometryError::OutOfRange(format!("coordinate {c}")));
        }
        Ok(())
    }

    pub fn add(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    pub fn scale(&self, c: u16, a: &[u16]) -> Vec<u16> {
        a.iter().map(|&x| self.field.mul(c, x)).collect()
    }

    /// Canonical normals of F_q^k in canonical order.
    pub fn canonical_vectors(&self, k: usize) -> Vec<Vec<u16>> {
        let q = self.q() as usize;
        let mut out = Vec::new();
        for lead in 0..k {
            let tail = k - lead - 1;
            for rest in 0..q.pow(tail as u32) {
                let mut v = vec![0u16; k];
                v[lead] = 1;
                let mut r = rest;
                for slot in v[lead + 1..].iter_mut().rev() {
                    *slot = (r % q) as u16;
                    r /= q;
                }
                out.push(v);
            }
        }
        out
    }

    /// All (q^m - 1)/(q - 1) canonical hyperplane normals.
    pub fn normals(&self) -> Vec<Vec<u16>> {
        self.canonical_vectors(self.m)
    }

    /// Every affine hyperplane, in canonical order.
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        self.normals()
            .into_iter()
            .flat_map(|normal| self.field.elements().map(move |offset| Hyperplane { normal: normal.clone(), offset }))
            .collect()
    }

    pub fn hyperplane_count(&self) -> usize {
        let q = self.q() as usize;
        q * (self.size - 1) / (q - 1)
    }

    /// `|S ∩ {normal·x = c}|` for every offset c, indexed by code.
    pub fn level_counts(&self, normal: &[u16], set: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.q() as usize];
        for &i in set {
            counts[dot(&self.field, normal, &self.coords(i)) as usize] += 1;
        }
        counts
    }

    pub fn hyperplane_points(&self, h: &Hyperplane) -> Vec<usize> {
        (0..self.size).filter(|&i| h.contains(self, &self.coords(i))).collect()
    }

    pub fn check_set(&self, set: &[usize]) -> Result<Vec<usize>, GeometryError> {
        if let Some(&i) = set.iter().find(|&&i| i >= self.size) {
            return Err(GeometryError::OutOfRange(format!("point index {i}")));
        }
        let mut v = set.to_vec();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// Equation form of a flat: `[λ]=c` constraints joined by ` & `, or
    /// `whole space` for codimension 0.
    pub fn describe(&self, flat: &Flat) -> String {
        let eqs = flat.equations(self);
        if eqs.is_empty() {
            return "whole space".to_string();
        }
        eqs.iter().map(Hyperplane::to_string).collect::<Vec<_>>().join(" & ")
    }

    /// Parses the point-set file format: one point per line as
    /// comma-separated element codes; blank lines and `#` lines ignored.
    pub fn parse_point_set(&self, text: &str) -> Result<Vec<usize>, GeometryError> {
        let mut out = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let coords = line
                .split(',')
                .map(|c| c.trim().parse::<u16>().map_err(|_| GeometryError::Parse(line.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            self.check_point(&coords)?;
            out.push(self.index(&coords));
        }
        self.check_set(&out)
    }

    pub fn format_point_set(&self, set: &[usize]) -> String {
        set.iter()
            .map(|&i| {
                let c: Vec<String> = self.coords(i).iter().map(u16::to_string).collect();
                c.join(",") + "\n"
            })
            .collect()
    }
}

/// `{x : normal·x = offset}` with the normal in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hyperplane {
    normal: Vec<u16>,
    offset: u16,
}

impl Hyperplane {
    /// Builds a hyperplane, rescaling so the leading normal coordinate is 1.
    pub fn new(space: &Space, normal: Vec<u16>, offset: u16) -> Result<Hyperplane, GeometryError> {
        space.check_point(&normal)?;
        if offset as u32 >= space.q() {
            return Err(GeometryError::OutOfRange(format!("offset {offset}")));
        }
        let f = space.field();
        let lead = *normal.iter().find(|&&c| c != 0).ok_or(GeometryError::ZeroNormal)?;
        let s = f.inv(lead).expect("nonzero");
        Ok(Hyperplane { normal: space.scale(s, &normal), offset: f.mul(s, offset) })
    }

    pub fn normal(&self) -> &[u16] {
        &self.normal
    }

    pub fn offset(&self) -> u16 {
        self.offset
    }

    pub fn contains(&self, space: &Space, coords: &[u16]) -> bool {
        dot(space.field(), &self.normal, coords) == self.offset
    }

    /// The q translates of this hyperplane, by offset code.
    pub fn parallel_class(&self, space: &Space) -> Vec<Hyperplane> {
        space.field().elements().map(|offset| Hyperplane { normal: self.normal.clone(), offset }).collect()
    }

    /// Parses `[λ1,...,λm]=c`.
    pub fn parse(space: &Space, s: &str) -> Result<Hyperplane, GeometryError> {
        let err = || GeometryError::Parse(s.to_string());
        let (lhs, rhs) = s.trim().split_once('=').ok_or_else(err)?;
        let inner = lhs.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(err)?;
        let normal =
            inner.split(',').map(|c| c.trim().parse::<u16>().map_err(|_| err())).collect::<Result<Vec<_>, _>>()?;
        let offset = rhs.trim().parse::<u16>().map_err(|_| err())?;
        if offset as u32 >= space.q() {
            return Err(GeometryError::OutOfRange(format!("offset {offset}")));
        }
        Hyperplane::new(space, normal, offset)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.normal.iter().map(u16::to_string).collect();
        write!(f, "[{}]={}", n.join(","), self.offset)
    }
}

/// An affine subspace `base + span(directions)`.
///
/// Stored canonically: directions in reduced row echelon form and the base
/// reduced against them, so equal point sets give equal values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Flat {
    base: Vec<u16>,
    directions: Vec<Vec<u16>>,
}

impl Flat {
    pub fn new(space: &Space, base: Vec<u16>, directions: Vec<Vec<u16>>) -> Result<Flat, GeometryError> {
        space.check_point(&base)?;
        for d in &directions {
            space.check_point(d)?;
        }
        let count = directions.len();
        let mut dirs = directions;
        let pivots = row_reduce(space.field(), &mut dirs);
        if pivots.len() != count {
            return Err(GeometryError::DependentDirections);
        }
        let mut base = base;
        for (row, &pc) in dirs.iter().zip(&pivots) {
            let c = base[pc];
            if c != 0 {
                base = space.sub(&base, &space.scale(c, row));
            }
        }
        Ok(Flat { base, directions: dirs })
    }

    pub fn point(space: &Space, index: usize) -> Flat {
        Flat { base: space.coords(index), directions: vec![] }
    }

    pub fn whole(space: &Space) -> Flat {
        let dirs = (0..space.m())
            .map(|i| {
                let mut v = vec![0u16; space.m()];
                v[i] = 1;
                v
            })
            .collect();
        Flat { base: vec![0; space.m()], directions: dirs }
    }

    pub fn base(&self) -> &[u16] {
        &self.base
    }

    pub fn directions(&self) -> &[Vec<u16>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn codim(&self) -> usize {
        self.base.len() - self.directions.len()
    }

    /// Number of points, q^dim.
    pub fn size(&self, space: &Space) -> usize {
        (space.q() as usize).pow(self.dim() as u32)
    }

    pub fn contains(&self, space: &Space, coords: &[u16]) -> bool {
        let mut rows = self.directions.clone();
        let before = rows.len();
        rows.push(space.sub(coords, &self.base));
        rank(space.field(), &rows) == before
    }

    /// Sorted point indices of the flat.
    pub fn points(&self, space: &Space) -> Vec<usize> {
        let q = space.q() as usize;
        let mut out = Vec::with_capacity(self.size(space));
        for combo in 0..self.size(space) {
            let mut x = self.base.clone();
            let mut r = combo;
            for dir in &self.directions {
                let c = (r % q) as u16;
                r /= q;
                if c != 0 {
                    x = space.add(&x, &space.scale(c, dir));
                }
            }
            out.push(space.index(&x));
        }
        out.sort_unstable();
        out
    }

    /// Hyperplane equations cutting out the flat, in reduced echelon form.
    pub fn equations(&self, space: &Space) -> Vec<Hyperplane> {
        null_space(space.field(), &self.directions, space.m())
            .into_iter()
            .map(|normal| {
                let offset = dot(space.field(), &normal, &self.base);
                Hyperplane { normal, offset }
            })
            .collect()
    }

    pub fn contains_flat(&self, space: &Space, other: &Flat) -> bool {
        self.contains(space, &other.base)
            && other.directions.iter().all(|d| {
                let mut rows = self.directions.clone();
                rows.push(d.clone());
                rank(space.field(), &rows) == self.directions.len()
            })
    }
}

/// `x ↦ matrix·x + translation` with an invertible matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    matrix: Vec<Vec<u16>>,
    translation: Vec<u16>,
}

impl AffineMap {
    pub fn new(space: &Space, matrix: Vec<Vec<u16>>, translation: Vec<u16>) -> Result<AffineMap, GeometryError> {
        space.check_point(&translation)?;
        if matrix.len() != space.m() {
            return Err(GeometryError::DimensionMismatch { expected: space.m(), got: matrix.len() });
        }
        for row in &matrix {
            space.check_point(row)?;
        }
        if rank(space.field(), &matrix) != space.m() {
            return Err(GeometryError::NotInvertible);
        }
        Ok(AffineMap { matrix, translation })
    }

    pub fn identity(space: &Space) -> AffineMap {
        AffineMap { matrix: Flat::whole(space).directions, translation: vec![0; space.m()] }
    }

    pub fn translation_by(space: &Space, b: Vec<u16>) -> Result<AffineMap, GeometryError> {
        AffineMap::new(space, Flat::whole(space).directions, b)
    }

    /// Uniformly random element of the affine group.
    pub fn random<R: Rng + ?Sized>(space: &Space, rng: &mut R) -> AffineMap {
        let q = space.q();
        let m = space.m();
        let draw = |rng: &mut R| (0..m).map(|_| rng.gen_range(0..q) as u16).collect::<Vec<_>>();
        loop {
            let matrix: Vec<Vec<u16>> = (0..m).map(|_| draw(rng)).collect();
            if rank(space.field(), &matrix) == m {
                let translation = draw(rng);
                return AffineMap { matrix, translation };
            }
        }
    }

    pub fn matrix(&self) -> &[Vec<u16>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[u16] {
        &self.translation
    }

    pub fn apply(&self, space: &Space, x: &[u16]) -> Vec<u16> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, &b)| space.field().add(dot(space.field(), row, x), b))
            .collect()
    }

    /// `perm[i]` is the index of the image of point `i`.
    pub fn permutation(&self, space: &Space) -> Vec<u32> {
        (0..space.size()).map(|i| space.index(&self.apply(space, &space.coords(i))) as u32).collect()
    }
}

/// Rank of the difference set of `set` and its affine hull.
///
/// The difference vectors are taken from the smallest point of the set.
pub fn affine_hull_rank(space: &Space, set: &[usize]) -> Result<(usize, Flat), GeometryError> {
    let set = space.check_set(set)?;
    let &first = set.first().ok_or(GeometryError::EmptySet)?;
    let a = space.coords(first);
    let diffs: Vec<Vec<u16>> = set[1..].iter().map(|&b| space.sub(&space.coords(b), &a)).collect();
    let mut basis = diffs;
    row_reduce(space.field(), &mut basis);
    let rank = basis.len();
    let flat = Flat::new(space, a, basis).expect("row-reduced basis is independent");
    Ok((rank, flat))
}

/// The set as a flat, if it is exactly an affine subspace.
pub fn is_flat(space: &Space, set: &[usize]) -> Result<Option<Flat>, GeometryError> {
    let (_, hull) = affine_hull_rank(space, set)?;
    let distinct = space.check_set(set)?.len();
    Ok((hull.size(space) == distinct).then_some(hull))
}

pub fn apply_affine(space: &Space, tau: &AffineMap, set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&i| space.index(&tau.apply(space, &space.coords(i)))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Outcome of searching for a hyperplane disjoint from a point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AvoidOutcome {
    /// The intersection hypothesis held and this is the first disjoint hyperplane.
    Found { hyperplane: Hyperplane },
    /// Some hyperplane meets the set in fewer than t·q^(n-1) points.
    HypothesisFails { hyperplane: Hyperplane, count: usize },
    /// The hypothesis held but no hyperplane avoids the set.
    NotFound,
}

/// Exhaustive search for a hyperplane missing `set`, after checking that
/// every hyperplane meets the set in either 0 or at least `t·q^(n-1)` points.
pub fn find_avoiding_hyperplane(space: &Space, set: &[usize], t: usize, n: u32) -> Result<AvoidOutcome, GeometryError> {
    let set = space.check_set(set)?;
    let q = space.q() as usize;
    let shape_err = || GeometryError::HypothesisShape { size: set.len(), t, q: space.q(), n };
    let target = q.checked_pow(n).and_then(|x| x.checked_mul(t)).ok_or_else(shape_err)?;
    if t == 0 || t >= q || set.len() != target || target >= space.size() {
        return Err(shape_err());
    }
    let normals = space.normals();
    let histograms: Vec<Vec<usize>> = normals.iter().map(|nv| space.level_counts(nv, &set)).collect();
    // count >= t·q^(n-1)  <=>  count·q >= t·q^n
    for (nv, counts) in normals.iter().zip(&histograms) {
        for (offset, &count) in counts.iter().enumerate() {
            if count > 0 && count * q < target {
                let hyperplane = Hyperplane { normal: nv.clone(), offset: offset as u16 };
                return Ok(AvoidOutcome::HypothesisFails { hyperplane, count });
            }
        }
    }
    for (nv, counts) in normals.iter().zip(&histograms) {
        if let Some(offset) = counts.iter().position(|&c| c == 0) {
            let hyperplane = Hyperplane { normal: nv.clone(), offset: offset as u16 };
            return Ok(AvoidOutcome::Found { hyperplane });
        }
    }
    Ok(AvoidOutcome::NotFound)
}

/// A point set written as a union of parallel flats of codimension one
/// inside an ambient flat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionStructure {
    pub ambient: Flat,
    /// Linear functional on the ambient flat, in the coordinates given by
    /// its echelon direction basis; canonical form.
    pub direction: Vec<u16>,
    /// Levels of `direction` (relative to the ambient base) making up the set.
    pub offsets: Vec<u16>,
    pub components: Vec<Flat>,
}

impl UnionStructure {
    /// Sorted union of the component point sets.
    pub fn union_points(&self, space: &Space) -> Vec<usize> {
        let mut pts: Vec<usize> = self.components.iter().flat_map(|c| c.points(space)).collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

/// Decomposes `set` as the union of `q - s` parallel flats of codimension
/// `t + 1` inside a flat of codimension `t`, if possible. The ambient flat is
/// the affine hull; the first direction in canonical order whose level sets
/// tile the set is returned.
pub fn flats_union_classify(
    space: &Space,
    set: &[usize],
    t: usize,
    s: usize,
) -> Result<Option<UnionStructure>, GeometryError> {
    let q = space.q() as usize;
    let m = space.m();
    if t >= m || s + 2 > q {
        return Err(GeometryError::Parameter(format!("need t < m and s <= q-2, got t={t}, s={s}")));
    }
    let set = space.check_set(set)?;
    let expected = (q - s) * q.pow((m - t - 1) as u32);
    if set.len() != expected {
        return Err(GeometryError::SizeMismatch { expected, got: set.len() });
    }
    let (rank, ambient) = affine_hull_rank(space, &set)?;
    if rank != m - t {
        return Ok(None);
    }
    let f = space.field();
    let d = rank;
    let level_size = q.pow(d as u32 - 1);
    // ambient coordinates of each point w.r.t. the echelon basis
    let mut basis = ambient.directions().to_vec();
    let pivots = row_reduce(f, &mut basis);
    let local: Vec<Vec<u16>> = set
        .iter()
        .map(|&i| {
            let diff = space.sub(&space.coords(i), ambient.base());
            pivots.iter().map(|&p| diff[p]).collect()
        })
        .collect();
    for mu in space.canonical_vectors(d) {
        let mut counts = vec![0usize; q];
        for c in &local {
            counts[dot(f, &mu, c) as usize] += 1;
        }
        if counts.iter().any(|&c| c != 0 && c != level_size) {
            continue;
        }
        let lead = mu.iter().position(|&c| c != 0).expect("canonical vector is nonzero");
        let kernel: Vec<Vec<u16>> =
            (0..d).filter(|&i| i != lead).map(|i| space.sub(&basis[i], &space.scale(mu[i], &basis[lead]))).collect();
        let offsets: Vec<u16> = (0..q).filter(|&o| counts[o] > 0).map(|o| o as u16).collect();
        let components = offsets
            .iter()
            .map(|&o| {
                let base = space.add(ambient.base(), &space.scale(o, &basis[lead]));
                Flat::new(space, base, kernel.clone()).expect("kernel basis is independent")
            })
            .collect();
        return Ok(Some(UnionStructure { ambient, direction: mu, offsets, components }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u32, m: usize) -> Space {
        Space::new(Field::with_order(q).unwrap(), m).unwrap()
    }

    fn pts(sp: &Space, list: &[&[u16]]) -> Vec<usize> {
        let mut v: Vec<usize> = list.iter().map(|c| sp.index(c)).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn coords_roundtrip_and_order() {
        let sp = space(3, 2);
        assert_eq!(sp.coords(1), vec![0, 1]);
        assert_eq!(sp.coords(3), vec![1, 0]);
        for i in 0..sp.size() {
            assert_eq!(sp.index(&sp.coords(i)), i);
        }
    }

    #[test]
    fn canonical_normal_order() {
        let sp = space(2, 2);
        assert_eq!(sp.normals(), vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(space(3, 3).normals().len(), 13);
        assert_eq!(space(4, 2).hyperplanes().len(), space(4, 2).hyperplane_count());
    }

    #[test]
    fn hyperplane_canonical_form() {
        let sp = space(3, 2);
        let h = Hyperplane::new(&sp, vec![0, 2], 1).unwrap();
        assert_eq!(h.normal(), &[0, 1]);
        assert_eq!(h.offset(), 2);
        assert_eq!(h.to_string(), "[0,1]=2");
        assert_eq!(Hyperplane::parse(&sp, "[0,2]=1").unwrap(), h);
        assert_eq!(Hyperplane::new(&sp, vec![0, 0], 0), Err(GeometryError::ZeroNormal));
    }

    #[test]
    fn parallel_class_examples() {
        let sp = space(3, 2);
        let h = Hyperplane::new(&sp, vec![1, 0], 0).unwrap();
        let class: Vec<String> = h.parallel_class(&sp).iter().map(|h| h.to_string()).collect();
        assert_eq!(class, vec!["[1,0]=0", "[1,0]=1", "[1,0]=2"]);
        let sp2 = space(2, 2);
        let h = Hyperplane::new(&sp2, vec![1, 1], 1).unwrap();
        let offs: Vec<u16> = h.parallel_class(&sp2).iter().map(Hyperplane::offset).collect();
        assert_eq!(offs, vec![0, 1]);
    }

    #[test]
    fn hull_examples() {
        let sp = space(2, 2);
        let (r, hull) = affine_hull_rank(&sp, &pts(&sp, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!((r, hull.dim()), (2, 2));
        let (r, hull) = affine_hull_rank(&sp, &[3]).unwrap();
        assert_eq!((r, hull.points(&sp)), (0, vec![3]));
        let (r, hull) = affine_hull_rank(&sp, &pts(&sp, &[&[1, 0], &[1, 1]])).unwrap();
        assert_eq!(r, 1);
        assert_eq!(sp.describe(&hull), "[1,0]=1");
        assert_eq!(affine_hull_rank(&sp, &[]), Err(GeometryError::EmptySet));
    }

    #[test]
    fn is_flat_examples() {
        let sp = space(2, 2);
        assert_eq!(is_flat(&sp, &pts(&sp, &[&[1, 0], &[1, 1]])).unwrap().unwrap().dim(), 1);
        assert!(is_flat(&sp, &pts(&sp, &[&[0, 0], &[1, 0], &[1, 1]])).unwrap().is_none());
        let sp3 = space(3, 3);
        let all: Vec<usize> = (0..sp3.size()).collect();
        assert_eq!(is_flat(&sp3, &all).unwrap().unwrap().dim(), 3);
        assert_eq!(is_flat(&sp3, &[]), Err(GeometryError::EmptySet));
    }

    #[test]
    fn avoiding_hyperplane_line_in_plane() {
        let sp = space(3, 2);
        let line = pts(&sp, &[&[0, 0], &[0, 1], &[0, 2]]);
        match find_avoiding_hyperplane(&sp, &line, 1, 1).unwrap() {
            AvoidOutcome::Found { hyperplane } => assert_eq!(hyperplane.to_string(), "[1,0]=1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn avoiding_hyperplane_shape_errors() {
        let sp = space(3, 2);
        let all: Vec<usize> = (0..9).collect();
        assert!(matches!(find_avoiding_hyperplane(&sp, &all, 1, 2), Err(GeometryError::HypothesisShape { .. })));
        assert!(matches!(find_avoiding_hyperplane(&sp, &[0, 1], 3, 0), Err(GeometryError::HypothesisShape { .. })));
        assert!(matches!(find_avoiding_hyperplane(&sp, &[0, 1], 1, 1), Err(GeometryError::HypothesisShape { .. })));
    }

    #[test]
    fn classify_canonical_support() {
        let sp = space(3, 2);
        let set = pts(&sp, &[&[0, 0], &[0, 1]]);
        let u = flats_union_classify(&sp, &set, 1, 1).unwrap().unwrap();
        assert_eq!(sp.describe(&u.ambient), "[1,0]=0");
        assert_eq!(u.offsets, vec![0, 1]);
        assert_eq!(u.components.len(), 2);
        assert!(u.components.iter().all(|c| c.dim() == 0));
        assert_eq!(u.union_points(&sp), set);
    }

    #[test]
    fn classify_full_space() {
        let sp = space(3, 2);
        let all: Vec<usize> = (0..9).collect();
        let u = flats_union_classify(&sp, &all, 0, 0).unwrap().unwrap();
        assert_eq!(u.ambient.codim(), 0);
        let eqs: Vec<String> = u.components.iter().map(|c| sp.describe(c)).collect();
        assert_eq!(eqs, vec!["[1,0]=0", "[1,0]=1", "[1,0]=2"]);
    }

    #[test]
    fn classify_rejects_bad_size() {
        let sp = space(3, 2);
        assert!(matches!(flats_union_classify(&sp, &[0], 1, 1), Err(GeometryError::SizeMismatch { .. })));
        // any two points lie on a line
        assert!(flats_union_classify(&sp, &[0, 4], 1, 1).unwrap().is_some());
        assert!(flats_union_classify(&sp, &[0, 1, 2, 3, 4, 8], 0, 1).unwrap().is_none());
    }

    #[test]
    fn affine_map_basics() {
        let sp = space(2, 2);
        let id = AffineMap::identity(&sp);
        let set = vec![1, 2];
        assert_eq!(apply_affine(&sp, &id, &set), set);
        assert_eq!(AffineMap::new(&sp, vec![vec![1, 1], vec![1, 1]], vec![0, 0]), Err(GeometryError::NotInvertible));
        let shift = AffineMap::translation_by(&sp, vec![1, 0]).unwrap();
        let line = pts(&sp, &[&[0, 0], &[0, 1]]);
        let image = apply_affine(&sp, &shift, &line);
        assert_eq!(image, pts(&sp, &[&[1, 0], &[1, 1]]));
    }

    #[test]
    fn point_set_format() {
        let sp = space(3, 2);
        let set = sp.parse_point_set("# a line\n0,0\n\n0,1\n0,2\n").unwrap();
        assert_eq!(set, vec![0, 1, 2]);
        assert_eq!(sp.format_point_set(&set), "0,0\n0,1\n0,2\n");
        assert!(sp.parse_point_set("0,3\n").is_err());
        assert!(sp.parse_point_set("0\n").is_err());
    }
}
