//! Finite weighted measure spaces, vectors, and operators between them.
//!
//! A [`WeightedSpace`] is an ordered list of atoms with strictly positive
//! masses; `L^p` of such a space is just `C^n` with the weighted p-norm.
//! All other modules build on the constructions here: tensor products,
//! disjoint unions, and weight renormalization.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::C64;

/// Finite atomic measure space: ordered atom labels with positive masses.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

impl WeightedSpace {
    pub fn new(atoms: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::ShapeMismatch { context: "WeightedSpace::new" });
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::NotPositive { what: "atom weight" });
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(Error::Invalid { detail: format!("duplicate atom label {a:?}") });
            }
        }
        Ok(Self { atoms, weights })
    }

    /// `n` atoms `"0".."n-1"`, each of weight 1 (counting measure).
    pub fn counting(n: usize) -> Self {
        Self::uniform(n, 1.0)
    }

    /// `n` atoms `"0".."n-1"`, each of weight `1/n` (normalized counting
    /// measure, the measure behind `M^p_d`).
    pub fn normalized_counting(n: usize) -> Self {
        Self::uniform(n, 1.0 / n as f64)
    }

    fn uniform(n: usize, w: f64) -> Self {
        Self {
            atoms: (0..n).map(|i| format!("{i}")).collect(),
            weights: vec![w; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// True when every atom carries the same mass.
    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }
}

/// Element of `L^p` over a [`WeightedSpace`]: one complex coordinate per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct LpVector {
    pub space: WeightedSpace,
    pub coords: Vec<C64>,
}

impl LpVector {
    pub fn new(space: WeightedSpace, coords: Vec<C64>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::ShapeMismatch { context: "LpVector::new" });
        }
        Ok(Self { space, coords })
    }

    pub fn basis(space: WeightedSpace, i: usize) -> Self {
        let mut coords = vec![C64::new(0.0, 0.0); space.dim()];
        coords[i] = C64::new(1.0, 0.0);
        Self { space, coords }
    }

    pub fn zero(space: WeightedSpace) -> Self {
        let coords = vec![C64::new(0.0, 0.0); space.dim()];
        Self { space, coords }
    }
}

/// Weighted p-norm `(sum_x w(x) |v(x)|^p)^{1/p}`.
pub fn p_norm(v: &LpVector, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::BadExponent { p, context: "p_norm" });
    }
    if v.coords.len() != v.space.dim() {
        return Err(Error::ShapeMismatch { context: "p_norm" });
    }
    let mut acc = 0.0f64;
    for (c, &w) in v.coords.iter().zip(v.space.weights()) {
        acc += w * c.norm().powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// Dense complex operator between two weighted spaces.
///
/// Entries are stored row-major, rows indexed by codomain atoms and
/// columns by domain atoms, so `entry(i, j)` is the coefficient of the
/// i-th codomain atom in the image of the j-th domain basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub domain: WeightedSpace,
    pub codomain: WeightedSpace,
    m: Dense,
}

impl OperatorMatrix {
    pub fn new(domain: WeightedSpace, codomain: WeightedSpace, m: Dense) -> Result<Self> {
        if m.rows != codomain.dim() || m.cols != domain.dim() {
            return Err(Error::ShapeMismatch { context: "OperatorMatrix::new" });
        }
        Ok(Self { domain, codomain, m })
    }

    pub fn zero(domain: WeightedSpace, codomain: WeightedSpace) -> Self {
        let m = Dense::zero(codomain.dim(), domain.dim());
        Self { domain, codomain, m }
    }

    pub fn identity(space: WeightedSpace) -> Self {
        let m = Dense::identity(space.dim());
        Self { domain: space.clone(), codomain: space, m }
    }

    /// Matrix unit `e_{j,k}` on a single space: sends the k-th basis
    /// vector to the j-th and kills the rest.
    pub fn matrix_unit(space: WeightedSpace, j: usize, k: usize) -> Self {
        let mut m = Dense::zero(space.dim(), space.dim());
        *m.at_mut(j, k) = C64::new(1.0, 0.0);
        Self { domain: space.clone(), codomain: space, m }
    }

    pub fn from_fn(
        domain: WeightedSpace,
        codomain: WeightedSpace,
        mut f: impl FnMut(usize, usize) -> C64,
    ) -> Self {
        let m = Dense::from_fn(codomain.dim(), domain.dim(), &mut f);
        Self { domain, codomain, m }
    }

    pub fn dense(&self) -> &Dense {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m.at(row, col)
    }

    pub fn set_entry(&mut self, row: usize, col: usize, v: C64) {
        *self.m.at_mut(row, col) = v;
    }

    pub fn apply(&self, v: &LpVector) -> Result<LpVector> {
        if v.space != self.domain {
            return Err(Error::Mismatch { context: "OperatorMatrix::apply" });
        }
        let coords = self.m.matvec(&v.coords);
        Ok(LpVector { space: self.codomain.clone(), coords })
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if other.codomain != self.domain {
            return Err(Error::Mismatch { context: "OperatorMatrix::compose" });
        }
        Ok(OperatorMatrix {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            m: self.m.matmul(&other.m),
        })
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Mismatch { context: "OperatorMatrix::add" });
        }
        Ok(OperatorMatrix {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            m: self.m.add(&other.m),
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        Ok(self.add(&other.scale(C64::new(-1.0, 0.0)))?)
    }

    pub fn scale(&self, c: C64) -> OperatorMatrix {
        OperatorMatrix {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            m: self.m.scale(c),
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m.max_abs()
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    /// Conjugates away the weights: `D_w^{1/p} A D_w^{-1/p}` acts on the
    /// corresponding unweighted (counting-measure) spaces with the same
    /// p -> p operator norm. All norm solvers run on this form.
    pub fn unweighted_dense(&self, p: f64) -> Dense {
        let mut out = self.m.clone();
        for i in 0..out.rows {
            let wi = self.codomain.weight(i).powf(1.0 / p);
            for j in 0..out.cols {
                let wj = self.domain.weight(j).powf(1.0 / p);
                *out.at_mut(i, j) = out.at(i, j) * (wi / wj);
            }
        }
        out
    }
}

/// Tensor product of spaces: atoms are ordered pairs in row-major order
/// over (X, Y), and masses multiply.
pub fn tensor_space(x: &WeightedSpace, y: &WeightedSpace) -> WeightedSpace {
    let mut atoms = Vec::with_capacity(x.dim() * y.dim());
    let mut weights = Vec::with_capacity(x.dim() * y.dim());
    for (ax, &wx) in x.atoms().iter().zip(x.weights()) {
        for (ay, &wy) in y.atoms().iter().zip(y.weights()) {
            atoms.push(format!("({ax},{ay})"));
            weights.push(wx * wy);
        }
    }
    WeightedSpace { atoms, weights }
}

/// Kronecker-style tensor of operators on the tensor spaces.
pub fn tensor_operator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let domain = tensor_space(&a.domain, &b.domain);
    let codomain = tensor_space(&a.codomain, &b.codomain);
    let bd = b.domain.dim();
    let bc = b.codomain.dim();
    let m = Dense::from_fn(codomain.dim(), domain.dim(), &mut |row, col| {
        let (x2, y2) = (row / bc, row % bc);
        let (x1, y1) = (col / bd, col % bd);
        a.entry(x2, x1) * b.entry(y2, y1)
    });
    OperatorMatrix { domain, codomain, m }
}

/// Disjoint union of finitely many spaces, with the block embeddings and
/// extractions that witness the `L^p` direct-sum identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointUnion {
    pub space: WeightedSpace,
    /// Offset of the k-th block inside the union.
    offsets: Vec<usize>,
    parts: Vec<WeightedSpace>,
}

pub fn disjoint_union(spaces: &[WeightedSpace]) -> Result<DisjointUnion> {
    if spaces.is_empty() {
        return Err(Error::Invalid { detail: "disjoint union of an empty family".into() });
    }
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    let mut offsets = Vec::with_capacity(spaces.len());
    for (k, s) in spaces.iter().enumerate() {
        offsets.push(atoms.len());
        for (a, &w) in s.atoms().iter().zip(s.weights()) {
            atoms.push(format!("{k}:{a}"));
            weights.push(w);
        }
    }
    Ok(DisjointUnion {
        space: WeightedSpace { atoms, weights },
        offsets,
        parts: spaces.to_vec(),
    })
}

impl DisjointUnion {
    pub fn parts(&self) -> &[WeightedSpace] {
        &self.parts
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Isometric embedding of the k-th part into the union.
    pub fn embed(&self, k: usize, v: &LpVector) -> Result<LpVector> {
        if v.space != self.parts[k] {
            return Err(Error::Mismatch { context: "DisjointUnion::embed" });
        }
        let mut coords = vec![C64::new(0.0, 0.0); self.space.dim()];
        coords[self.offsets[k]..self.offsets[k] + v.coords.len()].copy_from_slice(&v.coords);
        Ok(LpVector { space: self.space.clone(), coords })
    }

    /// Extraction of the k-th block; `extract(k, embed(k, v)) == v`.
    pub fn extract(&self, k: usize, v: &LpVector) -> Result<LpVector> {
        if v.space != self.space {
            return Err(Error::Mismatch { context: "DisjointUnion::extract" });
        }
        let part = &self.parts[k];
        let coords = v.coords[self.offsets[k]..self.offsets[k] + part.dim()].to_vec();
        Ok(LpVector { space: part.clone(), coords })
    }

    /// Embeds an operator on the k-th part as a block of an operator on
    /// the union (zero elsewhere).
    pub fn embed_operator(&self, k: usize, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        if a.domain != self.parts[k] || a.codomain != self.parts[k] {
            return Err(Error::Mismatch { context: "DisjointUnion::embed_operator" });
        }
        let mut out = OperatorMatrix::zero(self.space.clone(), self.space.clone());
        let off = self.offsets[k];
        for i in 0..a.codomain.dim() {
            for j in 0..a.domain.dim() {
                out.set_entry(off + i, off + j, a.entry(i, j));
            }
        }
        Ok(out)
    }
}

/// Scales all weights by `c` and returns the conjugating isometry pair.
///
/// The map `u xi = c^{-1/p} xi` is an isometric bijection
/// `L^p(X) -> L^p(X')`, and `a -> u a u^{-1}` preserves operator p-norms.
pub struct Renormalization {
    pub space: WeightedSpace,
    /// `u : L^p(X) -> L^p(X')`.
    pub conjugator: OperatorMatrix,
    /// `u^{-1} : L^p(X') -> L^p(X)`.
    pub conjugator_inv: OperatorMatrix,
}

pub fn renormalize_weights(x: &WeightedSpace, c: f64, p: f64) -> Result<Renormalization> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NotPositive { what: "renormalization constant" });
    }
    if !(p >= 1.0) {
        return Err(Error::BadExponent { p, context: "renormalize_weights" });
    }
    let scaled = WeightedSpace {
        atoms: x.atoms.clone(),
        weights: x.weights.iter().map(|&w| c * w).collect(),
    };
    let s = c.powf(-1.0 / p);
    let n = x.dim();
    let mut fwd = Dense::zero(n, n);
    let mut bwd = Dense::zero(n, n);
    for i in 0..n {
        *fwd.at_mut(i, i) = C64::new(s, 0.0);
        *bwd.at_mut(i, i) = C64::new(1.0 / s, 0.0);
    }
    Ok(Renormalization {
        space: scaled.clone(),
        conjugator: OperatorMatrix { domain: x.clone(), codomain: scaled.clone(), m: fwd },
        conjugator_inv: OperatorMatrix { domain: scaled, codomain: x.clone(), m: bwd },
    })
}

/// Conjugates `a` on `L^p(X)` to the renormalized space: `u a u^{-1}`.
pub fn renormalize_operator(a: &OperatorMatrix, c: f64, p: f64) -> Result<OperatorMatrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch { context: "renormalize_operator" });
    }
    let r = renormalize_weights(&a.domain, c, p)?;
    r.conjugator.compose(a)?.compose(&r.conjugator_inv)
}
