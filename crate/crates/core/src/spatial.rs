//! Spatial partial isometries as structured data: a partial bijection of
//! atoms plus unimodular phases. The exponent p enters only at
//! realization time through the weight correction `(w(x)/w(map x))^{1/p}`.
//!
//! Also houses the checker that invertible isometries of `l^p` (p != 2)
//! are exactly complex permutation matrices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::opnorm::opnorm_value;
use crate::space::{tensor_space, OperatorMatrix, WeightedSpace};
use crate::C64;

/// Partial bijection of atoms with a unimodular phase per mapped atom.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialPartialIsometry {
    domain_space: WeightedSpace,
    codomain_space: WeightedSpace,
    /// domain atom index -> (codomain atom index, phase)
    map: BTreeMap<usize, (usize, C64)>,
}

impl SpatialPartialIsometry {
    pub fn new(
        domain_space: WeightedSpace,
        codomain_space: WeightedSpace,
        map: BTreeMap<usize, (usize, C64)>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (&x, &(y, phase)) in &map {
            if x >= domain_space.dim() || y >= codomain_space.dim() {
                return Err(Error::Invalid { detail: "atom index out of range".into() });
            }
            if !seen.insert(y) {
                return Err(Error::Invalid { detail: format!("map not injective at image {y}") });
            }
            if (phase.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Invalid { detail: "phase is not unimodular".into() });
            }
        }
        Ok(Self { domain_space, codomain_space, map })
    }

    pub fn identity(space: WeightedSpace) -> Self {
        let map = (0..space.dim()).map(|i| (i, (i, C64::new(1.0, 0.0)))).collect();
        Self { domain_space: space.clone(), codomain_space: space, map }
    }

    /// Permutation with phases on a single space.
    pub fn from_permutation(space: WeightedSpace, perm: &[usize], phases: &[C64]) -> Result<Self> {
        if perm.len() != space.dim() || phases.len() != space.dim() {
            return Err(Error::ShapeMismatch { context: "from_permutation" });
        }
        let map = perm
            .iter()
            .enumerate()
            .map(|(x, &y)| (x, (y, phases[x])))
            .collect();
        Self::new(space.clone(), space, map)
    }

    pub fn domain_space(&self) -> &WeightedSpace {
        &self.domain_space
    }

    pub fn codomain_space(&self) -> &WeightedSpace {
        &self.codomain_space
    }

    pub fn domain_support(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.keys().copied()
    }

    pub fn range_support(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.values().map(|&(y, _)| y)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.map.iter().map(|(&x, &(y, p))| (x, y, p))
    }

    pub fn image_of(&self, x: usize) -> Option<(usize, C64)> {
        self.map.get(&x).copied()
    }

    /// Total bijection between the two spaces?
    pub fn is_bijection(&self) -> bool {
        self.map.len() == self.domain_space.dim()
            && self.map.len() == self.codomain_space.dim()
    }

    /// True when every mapped atom keeps its mass. Weight-preserving
    /// isometries realize to the same matrix for every p.
    pub fn is_weight_preserving(&self) -> bool {
        self.map
            .iter()
            .all(|(&x, &(y, _))| self.domain_space.weight(x) == self.codomain_space.weight(y))
    }

    /// Realizes the spatial data as an operator on `L^p`:
    /// `delta_x -> phase(x) (w(x)/w(map x))^{1/p} delta_{map x}`.
    pub fn realize(&self, p: f64) -> Result<OperatorMatrix> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::BadExponent { p, context: "realize" });
        }
        let mut out = OperatorMatrix::zero(self.domain_space.clone(), self.codomain_space.clone());
        for (&x, &(y, phase)) in &self.map {
            let w = (self.domain_space.weight(x) / self.codomain_space.weight(y)).powf(1.0 / p);
            out.set_entry(y, x, phase * w);
        }
        Ok(out)
    }

    /// The reverse: inverse bijection with conjugated phases. Plays the
    /// role of the adjoint; `reverse(s) . s` realizes to the diagonal
    /// idempotent onto the domain support.
    pub fn reverse(&self) -> Self {
        let map = self
            .map
            .iter()
            .map(|(&x, &(y, phase))| (y, (x, phase.conj())))
            .collect();
        Self {
            domain_space: self.codomain_space.clone(),
            codomain_space: self.domain_space.clone(),
            map,
        }
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.codomain_space != self.domain_space {
            return Err(Error::Mismatch { context: "SpatialPartialIsometry::compose" });
        }
        let mut map = BTreeMap::new();
        for (&x, &(mid, ph1)) in &other.map {
            if let Some(&(y, ph2)) = self.map.get(&mid) {
                map.insert(x, (y, ph1 * ph2));
            }
        }
        Ok(Self {
            domain_space: other.domain_space.clone(),
            codomain_space: self.codomain_space.clone(),
            map,
        })
    }

    /// Tensor of spatial data on the tensor product spaces.
    pub fn tensor(&self, other: &Self) -> Self {
        let domain_space = tensor_space(&self.domain_space, &other.domain_space);
        let codomain_space = tensor_space(&self.codomain_space, &other.codomain_space);
        let dn = other.domain_space.dim();
        let cn = other.codomain_space.dim();
        let mut map = BTreeMap::new();
        for (&x1, &(y1, p1)) in &self.map {
            for (&x2, &(y2, p2)) in &other.map {
                map.insert(x1 * dn + x2, (y1 * cn + y2, p1 * p2));
            }
        }
        Self { domain_space, codomain_space, map }
    }
}

/// Permutation-with-phases decomposition of a complex permutation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationDecomposition {
    /// `permutation[col] = row` of the unique significant entry.
    pub permutation: Vec<usize>,
    /// Phase of that entry, per column.
    pub phases: Vec<C64>,
}

impl PermutationDecomposition {
    /// Rebuilds the matrix the decomposition describes.
    pub fn recompose(&self, space: WeightedSpace) -> OperatorMatrix {
        let mut out = OperatorMatrix::zero(space.clone(), space);
        for (col, (&row, &phase)) in self.permutation.iter().zip(&self.phases).enumerate() {
            out.set_entry(row, col, phase);
        }
        out
    }
}

/// Succeeds iff each row and column holds exactly one entry of modulus
/// at least `tol` and that entry is unimodular within `tol`.
pub fn is_complex_permutation(
    a: &OperatorMatrix,
    tol: f64,
) -> Result<Option<PermutationDecomposition>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch { context: "is_complex_permutation" });
    }
    if !a.domain.is_uniform() {
        return Err(Error::Invalid {
            detail: "complex permutation test requires equal atom weights".into(),
        });
    }
    let n = a.domain.dim();
    let mut permutation = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    let mut row_used = alloc::vec![false; n];
    for col in 0..n {
        let mut found: Option<usize> = None;
        for row in 0..n {
            if a.entry(row, col).norm() >= tol {
                if found.is_some() {
                    return Ok(None);
                }
                found = Some(row);
            }
        }
        let Some(row) = found else { return Ok(None) };
        if row_used[row] {
            return Ok(None);
        }
        row_used[row] = true;
        let entry = a.entry(row, col);
        if (entry.norm() - 1.0).abs() > tol {
            return Ok(None);
        }
        permutation.push(row);
        phases.push(entry);
    }
    Ok(Some(PermutationDecomposition { permutation, phases }))
}

/// Outcome of the Lamperti-type test for p != 2.
#[derive(Debug, Clone)]
pub enum LampertiVerdict {
    /// Isometric bijection; carries the decomposition and the checked
    /// norm gap (max of the two operator-norm defects).
    IsometricBijection { decomposition: PermutationDecomposition, gap: f64 },
    /// Not an isometric bijection; `norm_gap` is
    /// `max(|A|_p, |A^{-1}|_p) - 1`, or the defect of `|A|_p` alone when
    /// `A` is singular (`invertible = false`).
    NotIsometric { norm_gap: f64, invertible: bool },
}

/// Checks whether `a` is an invertible isometry of `l^p` (p != 2) by the
/// complex-permutation criterion, reporting a norm gap when it is not.
///
/// This is a checker, not a prover: the "only if" direction rests on the
/// computed norms of `a` and its inverse.
pub fn lamperti_verdict(a: &OperatorMatrix, p: f64, tol: f64) -> Result<LampertiVerdict> {
    if p == 2.0 {
        return Err(Error::BadExponent { p, context: "lamperti_verdict (p = 2 excluded)" });
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::BadExponent { p, context: "lamperti_verdict" });
    }
    if !a.is_square() {
        return Err(Error::ShapeMismatch { context: "lamperti_verdict" });
    }
    let inv = a
        .dense()
        .inverse()
        .ok()
        .map(|m| OperatorMatrix::new(a.codomain.clone(), a.domain.clone(), m).expect("shape"));
    if let Some(dec) = is_complex_permutation(a, tol)? {
        let na = opnorm_value(a, p)?;
        let ninv = match &inv {
            Some(b) => opnorm_value(b, p)?,
            None => {
                return Err(Error::Integrity {
                    detail: "complex permutation matrix must be invertible".into(),
                })
            }
        };
        let gap = (na - 1.0).abs().max((ninv - 1.0).abs());
        if gap > tol {
            return Err(Error::Integrity {
                detail: format!("permutation decomposition found but norm gap {gap:e}"),
            });
        }
        return Ok(LampertiVerdict::IsometricBijection { decomposition: dec, gap });
    }
    let na = opnorm_value(a, p)?;
    match inv {
        Some(b) => {
            let ninv = opnorm_value(&b, p)?;
            Ok(LampertiVerdict::NotIsometric { norm_gap: na.max(ninv) - 1.0, invertible: true })
        }
        None => Ok(LampertiVerdict::NotIsometric { norm_gap: (na - 1.0).abs(), invertible: false }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::space::tensor_operator;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn uniform(n: usize) -> WeightedSpace {
        WeightedSpace::normalized_counting(n)
    }

    #[test]
    fn identity_realizes_to_identity() {
        let s = uniform(3);
        let id = SpatialPartialIsometry::identity(s.clone());
        assert_eq!(id.realize(1.7).unwrap(), OperatorMatrix::identity(s));
    }

    #[test]
    fn reverse_is_involutive_and_inverts() {
        let s = uniform(4);
        let mut r = rng::stream(3);
        let perm = rng::permutation(&mut r, 4);
        let phases: Vec<C64> = (0..4).map(|_| rng::unit_phase(&mut r)).collect();
        let u = SpatialPartialIsometry::from_permutation(s.clone(), &perm, &phases).unwrap();
        assert_eq!(u.reverse().reverse(), u);
        for p in [1.0, 2.0, 3.0] {
            let prod = u.reverse().realize(p).unwrap().compose(&u.realize(p).unwrap()).unwrap();
            let id = OperatorMatrix::identity(s.clone());
            assert!(prod.sub(&id).unwrap().max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn block_injection_behaves_like_s_g() {
        // s_g : L^p(X) -> L^p(G x X), single block column; t_g s_g = 1 and
        // s_g t_g = multiplication by the indicator of {g} x X.
        let x = uniform(2);
        let g_count = 3usize;
        let gx = tensor_space(&WeightedSpace::counting(g_count), &x);
        for g in 0..g_count {
            let map = (0..x.dim()).map(|i| (i, (g * x.dim() + i, c(1.0, 0.0)))).collect();
            let s_g = SpatialPartialIsometry::new(x.clone(), gx.clone(), map).unwrap();
            let t_g = s_g.reverse();
            for p in [1.0, 2.5] {
                let sm = s_g.realize(p).unwrap();
                let tm = t_g.realize(p).unwrap();
                let ts = tm.compose(&sm).unwrap();
                assert!(
                    ts.sub(&OperatorMatrix::identity(x.clone())).unwrap().max_abs_entry() < 1e-13
                );
                let st = sm.compose(&tm).unwrap();
                for i in 0..gx.dim() {
                    for j in 0..gx.dim() {
                        let expect = if i == j && i / x.dim() == g { 1.0 } else { 0.0 };
                        assert!((st.entry(i, j) - c(expect, 0.0)).norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn base_d_shift_carries_weight_factor() {
        // One step of the h^{-1} map of the stabilized construction:
        // {0..dM-1} x Z^0 -> {0..M-1} x Z^1 with counting x lambda weights;
        // the realization picks up the factor d^{1/p}.
        let d = 2usize;
        let m_big = 4usize;
        let dom = WeightedSpace::counting(d * m_big);
        let cod = tensor_space(&WeightedSpace::counting(m_big), &uniform(d));
        let map = (0..d * m_big)
            .map(|n| {
                let (m0, k0) = (n / d, n % d);
                (n, (m0 * d + k0, c(1.0, 0.0)))
            })
            .collect();
        let v = SpatialPartialIsometry::new(dom.clone(), cod, map).unwrap();
        for p in [1.0, 2.0, 3.0] {
            let vm = v.realize(p).unwrap();
            // weight ratio 1 / (1/d) = d, so entries are d^{1/p}
            let expect = (d as f64).powf(1.0 / p);
            assert!((vm.entry(0, 0).norm() - expect).abs() < 1e-13);
            // realized map is isometric on basis vectors
            let e = crate::space::LpVector::basis(dom.clone(), 3);
            let ve = vm.apply(&e).unwrap();
            let n1 = crate::space::p_norm(&e, p).unwrap();
            let n2 = crate::space::p_norm(&ve, p).unwrap();
            assert!((n1 - n2).abs() < 1e-13);
        }
    }

    #[test]
    fn compose_and_tensor_commute_with_realize() {
        let s = uniform(3);
        let mut r = rng::stream(17);
        let mk = |r: &mut rand_chacha::ChaCha8Rng| {
            let perm = rng::permutation(r, 3);
            let phases: Vec<C64> = (0..3).map(|_| rng::unit_phase(r)).collect();
            SpatialPartialIsometry::from_permutation(s.clone(), &perm, &phases).unwrap()
        };
        let u = mk(&mut r);
        let v = mk(&mut r);
        let id = SpatialPartialIsometry::identity(s.clone());
        assert_eq!(u.compose(&id).unwrap(), u);
        // compose(reverse(s), s) = identity on support, up to phase roundoff
        let rev_then = u.reverse().compose(&u).unwrap();
        for (x, y, ph) in rev_then.pairs() {
            assert_eq!(x, y);
            assert!((ph - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert_eq!(rev_then.pairs().count(), 3);
        for p in [1.0, 1.5, 3.0] {
            let lhs = u.compose(&v).unwrap().realize(p).unwrap();
            let rhs = u.realize(p).unwrap().compose(&v.realize(p).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-12);
            let lhs = u.tensor(&v).realize(p).unwrap();
            let rhs = tensor_operator(&u.realize(p).unwrap(), &v.realize(p).unwrap());
            assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn complex_permutation_detection() {
        let s = uniform(2);
        let id = OperatorMatrix::identity(s.clone());
        let dec = is_complex_permutation(&id, 1e-8).unwrap().unwrap();
        assert_eq!(dec.permutation, alloc::vec![0, 1]);

        // diag(i, -1) . swap
        let mut m = OperatorMatrix::zero(s.clone(), s.clone());
        m.set_entry(0, 1, c(0.0, 1.0));
        m.set_entry(1, 0, c(-1.0, 0.0));
        let dec = is_complex_permutation(&m, 1e-8).unwrap().unwrap();
        assert_eq!(dec.permutation, alloc::vec![1, 0]);
        assert!((dec.phases[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((dec.phases[1] - c(0.0, 1.0)).norm() < 1e-14);
        assert!(dec.recompose(s.clone()).sub(&m).unwrap().max_abs_entry() < 1e-14);

        let h = OperatorMatrix::from_fn(s.clone(), s, |i, j| {
            let v = if i == 1 && j == 1 { -1.0 } else { 1.0 };
            c(v * core::f64::consts::FRAC_1_SQRT_2, 0.0)
        });
        assert!(is_complex_permutation(&h, 1e-8).unwrap().is_none());
    }

    #[test]
    fn lamperti_accepts_phase_permutations_and_rejects_hadamard() {
        let s = WeightedSpace::counting(4);
        let mut r = rng::stream(23);
        let perm = rng::permutation(&mut r, 4);
        let phases: Vec<C64> = (0..4).map(|_| rng::unit_phase(&mut r)).collect();
        let u = SpatialPartialIsometry::from_permutation(s.clone(), &perm, &phases).unwrap();
        let m = u.realize(3.0).unwrap();
        match lamperti_verdict(&m, 3.0, 1e-9).unwrap() {
            LampertiVerdict::IsometricBijection { gap, .. } => assert!(gap <= 1e-9),
            other => panic!("expected isometric verdict, got {other:?}"),
        }

        let s2 = WeightedSpace::counting(2);
        let h = OperatorMatrix::from_fn(s2.clone(), s2, |i, j| {
            let v = if i == 1 && j == 1 { -1.0 } else { 1.0 };
            c(v * core::f64::consts::FRAC_1_SQRT_2, 0.0)
        });
        match lamperti_verdict(&h, 1.0, 1e-9).unwrap() {
            LampertiVerdict::NotIsometric { norm_gap, invertible } => {
                assert!(invertible);
                assert!((norm_gap - (2.0f64.sqrt() - 1.0)).abs() < 1e-12);
            }
            other => panic!("expected non-isometric verdict, got {other:?}"),
        }
        assert!(lamperti_verdict(&h, 2.0, 1e-9).is_err());
    }
}
