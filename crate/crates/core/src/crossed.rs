//! Crossed products of finite-dimensional Lp operator algebras by finite
//! discrete groups and by windowed Z: convolution, the regular
//! representation as an explicit block operator, reduced norms relative
//! to a fixed representation of the coefficient algebra, coefficient
//! extraction, the standard conditional expectation, dual actions, and
//! multiplier maps.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::opnorm::{opnorm_seeded, opnorm_value, NormEstimate};
use crate::space::{disjoint_union, tensor_space, DisjointUnion, OperatorMatrix, WeightedSpace};
use crate::spatial::SpatialPartialIsometry;
use crate::{C64, DEFAULT_SEED};

/// Finite group presented by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    elements: Vec<String>,
    /// `table[g * n + h]` is the index of `g * h`.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the associativity, identity, and inverse axioms
    /// exhaustively before accepting the table.
    pub fn from_table(elements: Vec<String>, table: Vec<usize>) -> Result<Self> {
        let n = elements.len();
        if table.len() != n * n || n == 0 {
            return Err(Error::ShapeMismatch { context: "FiniteGroup::from_table" });
        }
        if table.iter().any(|&x| x >= n) {
            return Err(Error::GroupAxiom { detail: "table entry out of range".into() });
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let mut identity = None;
        for e in 0..n {
            if (0..n).all(|g| mul(e, g) == g && mul(g, e) == g) {
                identity = Some(e);
                break;
            }
        }
        let Some(identity) = identity else {
            return Err(Error::GroupAxiom { detail: "no identity element".into() });
        };
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| mul(g, h) == identity && mul(h, g) == identity) {
                Some(h) => inverse.push(h),
                None => {
                    return Err(Error::GroupAxiom {
                        detail: format!("element {} has no inverse", elements[g]),
                    })
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::GroupAxiom {
                            detail: format!(
                                "associativity fails at ({}, {}, {})",
                                elements[a], elements[b], elements[c]
                            ),
                        });
                    }
                }
            }
        }
        Ok(Self { elements, table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| format!("{i}")).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        Self::from_table(elements, table).expect("cyclic table is a group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let mut elements = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                elements.push(format!("({},{})", a.elements[i], b.elements[j]));
            }
        }
        let mut table = Vec::with_capacity(na * nb * na * nb);
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        table.push(a.mul(i1, i2) * nb + b.mul(j1, j2));
                    }
                }
            }
        }
        Self::from_table(elements, table).expect("product table is a group")
    }

    /// The symmetric group on three letters, elements as one-line
    /// permutation words.
    pub fn symmetric_3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let elements: Vec<String> =
            perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let mut table = Vec::with_capacity(36);
        for p in &perms {
            for q in &perms {
                let r = compose(p, q);
                table.push(perms.iter().position(|s| *s == r).unwrap());
            }
        }
        Self::from_table(elements, table).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_index(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }
}

/// Isometric action of a finite group on `L(L^p(X))`, implemented by a
/// homomorphic family of weight-preserving spatial bijections of `X`.
///
/// Weight preservation makes every `alpha_g = Ad(w_g)` independent of p,
/// so convolution and representations need no exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometricAction {
    group: FiniteGroup,
    carrier: WeightedSpace,
    implementers: Vec<SpatialPartialIsometry>,
    /// Realized implementer matrices and their inverses (p-independent).
    realized: Vec<(OperatorMatrix, OperatorMatrix)>,
}

impl IsometricAction {
    pub fn new(
        group: FiniteGroup,
        carrier: WeightedSpace,
        implementers: Vec<SpatialPartialIsometry>,
    ) -> Result<Self> {
        if implementers.len() != group.order() {
            return Err(Error::ShapeMismatch { context: "IsometricAction::new" });
        }
        for w in &implementers {
            if w.domain_space() != &carrier || w.codomain_space() != &carrier {
                return Err(Error::Mismatch { context: "implementer carrier" });
            }
            if !w.is_bijection() {
                return Err(Error::Invalid { detail: "implementer is not a bijection".into() });
            }
            if !w.is_weight_preserving() {
                return Err(Error::Invalid {
                    detail: "implementer does not preserve atom weights".into(),
                });
            }
        }
        let e = group.identity();
        let id = SpatialPartialIsometry::identity(carrier.clone());
        if !spatial_close(&implementers[e], &id, 1e-12) {
            return Err(Error::Invalid { detail: "identity implementer is not 1".into() });
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                let composed = implementers[g].compose(&implementers[h])?;
                if !spatial_close(&composed, &implementers[gh], 1e-9) {
                    return Err(Error::Invalid {
                        detail: format!(
                            "implementers are not a homomorphism at ({}, {})",
                            group.elements[g], group.elements[h]
                        ),
                    });
                }
            }
        }
        let realized = implementers
            .iter()
            .map(|w| {
                let fwd = w.realize(1.0).expect("realize");
                let bwd = w.reverse().realize(1.0).expect("realize");
                (fwd, bwd)
            })
            .collect();
        Ok(Self { group, carrier, implementers, realized })
    }

    /// Trivial action of `group` on a one-atom carrier (coefficients C).
    pub fn trivial_scalar(group: FiniteGroup) -> Self {
        let carrier = WeightedSpace::counting(1);
        let id = SpatialPartialIsometry::identity(carrier.clone());
        let implementers = alloc::vec![id; group.order()];
        Self::new(group, carrier, implementers).expect("trivial action is valid")
    }

    /// Translation action of `group` on itself: carrier atoms are the
    /// group elements with uniform mass `1/|G|`, and `w_g` permutes
    /// `x -> g x`. Coefficient matrices restricted to diagonals model
    /// `C(G)` with `alpha_g(f)(x) = f(g^{-1} x)`.
    pub fn translation(group: FiniteGroup) -> Self {
        let n = group.order();
        let carrier =
            WeightedSpace::new(group.elements.clone(), alloc::vec![1.0 / n as f64; n])
                .expect("group labels are distinct");
        let implementers = (0..n)
            .map(|g| {
                let perm: Vec<usize> = (0..n).map(|x| group.mul(g, x)).collect();
                let phases = alloc::vec![C64::new(1.0, 0.0); n];
                SpatialPartialIsometry::from_permutation(carrier.clone(), &perm, &phases)
                    .expect("permutation implementer")
            })
            .collect();
        Self::new(group, carrier, implementers).expect("translation action is valid")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn carrier(&self) -> &WeightedSpace {
        &self.carrier
    }

    pub fn implementer(&self, g: usize) -> &SpatialPartialIsometry {
        &self.implementers[g]
    }

    /// `alpha_g(a) = w_g a w_g^{-1}`.
    pub fn alpha(&self, g: usize, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        let (fwd, bwd) = &self.realized[g];
        fwd.compose(a)?.compose(bwd)
    }

    pub fn alpha_inv(&self, g: usize, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.alpha(self.group.inv(g), a)
    }
}

fn spatial_close(a: &SpatialPartialIsometry, b: &SpatialPartialIsometry, tol: f64) -> bool {
    let pa: BTreeMap<usize, (usize, C64)> = a.pairs().map(|(x, y, p)| (x, (y, p))).collect();
    let pb: BTreeMap<usize, (usize, C64)> = b.pairs().map(|(x, y, p)| (x, (y, p))).collect();
    if pa.len() != pb.len() {
        return false;
    }
    pa.iter().all(|(x, (y, p))| match pb.get(x) {
        Some((y2, p2)) => y == y2 && (p - p2).norm() <= tol,
        None => false,
    })
}

/// Finitely supported element `sum_g a_g u_g` of the convolution algebra.
#[derive(Debug, Clone)]
pub struct CcElement {
    action: Arc<IsometricAction>,
    coeffs: BTreeMap<usize, OperatorMatrix>,
}

impl CcElement {
    pub fn new(
        action: Arc<IsometricAction>,
        coeffs: BTreeMap<usize, OperatorMatrix>,
    ) -> Result<Self> {
        for (g, m) in &coeffs {
            if *g >= action.group.order() {
                return Err(Error::Invalid { detail: "coefficient index out of range".into() });
            }
            if m.domain != action.carrier || m.codomain != action.carrier {
                return Err(Error::Mismatch { context: "coefficient must act on the carrier" });
            }
        }
        Ok(Self { action, coeffs })
    }

    pub fn zero(action: Arc<IsometricAction>) -> Self {
        Self { action, coeffs: BTreeMap::new() }
    }

    /// `b u_g` with a single coefficient.
    pub fn monomial(action: Arc<IsometricAction>, g: usize, b: OperatorMatrix) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(g, b);
        Self::new(action, coeffs)
    }

    /// `u_g` (identity coefficient).
    pub fn unitary(action: Arc<IsometricAction>, g: usize) -> Result<Self> {
        let id = OperatorMatrix::identity(action.carrier.clone());
        Self::monomial(action, g, id)
    }

    pub fn action(&self) -> &Arc<IsometricAction> {
        &self.action
    }

    pub fn coefficient(&self, g: usize) -> OperatorMatrix {
        self.coeffs.get(&g).cloned().unwrap_or_else(|| {
            OperatorMatrix::zero(self.action.carrier.clone(), self.action.carrier.clone())
        })
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, OperatorMatrix> {
        &self.coeffs
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().filter(|(_, m)| m.max_abs_entry() > 0.0).map(|(&g, _)| g)
    }

    pub fn add(&self, other: &CcElement) -> Result<CcElement> {
        same_action(self, other, "CcElement::add")?;
        let mut coeffs = self.coeffs.clone();
        for (&g, m) in &other.coeffs {
            match coeffs.get_mut(&g) {
                Some(existing) => *existing = existing.add(m)?,
                None => {
                    coeffs.insert(g, m.clone());
                }
            }
        }
        Ok(CcElement { action: self.action.clone(), coeffs })
    }

    pub fn scale(&self, c: C64) -> CcElement {
        let coeffs = self.coeffs.iter().map(|(&g, m)| (g, m.scale(c))).collect();
        CcElement { action: self.action.clone(), coeffs }
    }

    pub fn sub(&self, other: &CcElement) -> Result<CcElement> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.max_abs_entry()))
    }
}

fn same_action(a: &CcElement, b: &CcElement, context: &'static str) -> Result<()> {
    if Arc::ptr_eq(&a.action, &b.action) || *a.action == *b.action {
        Ok(())
    } else {
        Err(Error::Mismatch { context })
    }
}

/// Convolution product `(a b)_g = sum_h a_h alpha_h(b_{h^{-1} g})`.
pub fn convolve(a: &CcElement, b: &CcElement) -> Result<CcElement> {
    same_action(a, b, "convolve")?;
    let group = &a.action.group;
    let mut coeffs: BTreeMap<usize, OperatorMatrix> = BTreeMap::new();
    for (&h, ah) in &a.coeffs {
        for (&k, bk) in &b.coeffs {
            let g = group.mul(h, k);
            let term = ah.compose(&a.action.alpha(h, bk)?)?;
            match coeffs.get_mut(&g) {
                Some(existing) => *existing = existing.add(&term)?,
                None => {
                    coeffs.insert(g, term);
                }
            }
        }
    }
    Ok(CcElement { action: a.action.clone(), coeffs })
}

/// Choice of the coefficient-algebra representation behind the regular
/// representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pi0 {
    /// The defining representation on `L^p(X)`.
    Identity,
    /// `(+)_{g in G} id . alpha_g` on the disjoint union of |G| copies
    /// of X. Always injective, and the default for reduced norms.
    TwistedSum,
}

/// Helper carrying the layout of the regular representation space.
pub struct RegularLayout {
    pub action: Arc<IsometricAction>,
    pub pi0: Pi0,
    /// Space the representation acts on: `l^p(G) (x) X_{pi0}`.
    pub space: WeightedSpace,
    /// Dimension of the pi0 block.
    pub block_dim: usize,
    union: Option<DisjointUnion>,
}

impl RegularLayout {
    pub fn new(action: Arc<IsometricAction>, pi0: Pi0) -> Self {
        let n = action.group.order();
        let group_space =
            WeightedSpace::new(action.group.elements().to_vec(), alloc::vec![1.0; n])
                .expect("group labels distinct");
        let (block, union) = match pi0 {
            Pi0::Identity => (action.carrier.clone(), None),
            Pi0::TwistedSum => {
                let copies = alloc::vec![action.carrier.clone(); n];
                let u = disjoint_union(&copies).expect("nonempty family");
                (u.space.clone(), Some(u))
            }
        };
        let space = tensor_space(&group_space, &block);
        let block_dim = block.dim();
        RegularLayout { action, pi0, space, block_dim, union }
    }

    /// Applies pi0 to a coefficient matrix.
    pub fn pi0_apply(&self, b: &OperatorMatrix) -> Result<OperatorMatrix> {
        match self.pi0 {
            Pi0::Identity => Ok(b.clone()),
            Pi0::TwistedSum => {
                let u = self.union.as_ref().expect("twisted sum layout");
                let mut out = OperatorMatrix::zero(u.space.clone(), u.space.clone());
                for g in 0..self.action.group.order() {
                    let block = self.action.alpha(g, b)?;
                    let off = u.offset(g);
                    for i in 0..block.codomain.dim() {
                        for j in 0..block.domain.dim() {
                            out.set_entry(off + i, off + j, block.entry(i, j));
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Inverts pi0 on its image (extracts the identity copy for the
    /// twisted sum), without consistency checking.
    fn pi0_extract(&self, m: &OperatorMatrix) -> OperatorMatrix {
        match self.pi0 {
            Pi0::Identity => m.clone(),
            Pi0::TwistedSum => {
                let u = self.union.as_ref().expect("twisted sum layout");
                let e = self.action.group.identity();
                let off = u.offset(e);
                let x = &self.action.carrier;
                OperatorMatrix::from_fn(x.clone(), x.clone(), |i, j| m.entry(off + i, off + j))
            }
        }
    }

    /// Embeds a carrier vector into the identity pi0 copy of the block
    /// column `k = g^{-1}`, the column through which the coefficient
    /// `a_g` acts untwisted.
    pub fn embed_identity_copy(
        &self,
        g: usize,
        x: &crate::space::LpVector,
    ) -> Result<crate::space::LpVector> {
        if x.space != self.action.carrier {
            return Err(Error::Mismatch { context: "embed_identity_copy" });
        }
        let k = self.action.group.inv(g);
        let off = match self.pi0 {
            Pi0::Identity => 0,
            Pi0::TwistedSum => {
                self.union.as_ref().expect("layout").offset(self.action.group.identity())
            }
        };
        let mut coords = alloc::vec![C64::new(0.0, 0.0); self.space.dim()];
        for (j, &c) in x.coords.iter().enumerate() {
            coords[k * self.block_dim + off + j] = c;
        }
        crate::space::LpVector::new(self.space.clone(), coords)
    }

    /// Extracts the `(h, k)` block of an operator on the layout space.
    pub fn block(&self, m: &OperatorMatrix, h: usize, k: usize) -> OperatorMatrix {
        let d = self.block_dim;
        let block_space = match self.pi0 {
            Pi0::Identity => self.action.carrier.clone(),
            Pi0::TwistedSum => self.union.as_ref().expect("layout").space.clone(),
        };
        OperatorMatrix::from_fn(block_space.clone(), block_space, |i, j| {
            m.entry(h * d + i, k * d + j)
        })
    }
}

/// The regular representation as an explicit block matrix: the `(h, k)`
/// block is `pi0(alpha_h^{-1}(a_{h k^{-1}}))`.
pub fn regular_representation(a: &CcElement, pi0: Pi0) -> Result<OperatorMatrix> {
    let layout = RegularLayout::new(a.action.clone(), pi0);
    regular_representation_in(a, &layout)
}

pub fn regular_representation_in(a: &CcElement, layout: &RegularLayout) -> Result<OperatorMatrix> {
    let group = &a.action.group;
    let n = group.order();
    let d = layout.block_dim;
    let mut out = OperatorMatrix::zero(layout.space.clone(), layout.space.clone());
    for (&g, ag) in &a.coeffs {
        for h in 0..n {
            // h = g k  <=>  k = g^{-1} h; block (h, k) gets pi0(alpha_h^{-1}(a_g)).
            let k = group.mul(group.inv(g), h);
            let block = layout.pi0_apply(&a.action.alpha_inv(h, ag)?)?;
            for i in 0..d {
                for j in 0..d {
                    let v = out.entry(h * d + i, k * d + j) + block.entry(i, j);
                    out.set_entry(h * d + i, k * d + j, v);
                }
            }
        }
    }
    Ok(out)
}

/// Reduced norm of `a` relative to the default `pi0 = (+)_g id . alpha_g`:
/// exact for p in {1, 2}, a certified lower bound otherwise.
pub fn reduced_norm(a: &CcElement, p: f64) -> Result<NormEstimate> {
    reduced_norm_seeded(a, p, DEFAULT_SEED)
}

pub fn reduced_norm_seeded(a: &CcElement, p: f64, seed: u64) -> Result<NormEstimate> {
    let layout = RegularLayout::new(a.action.clone(), Pi0::TwistedSum);
    let rep = regular_representation_in(a, &layout)?;
    let mut best = opnorm_seeded(&rep, p, seed)?;
    if p != 1.0 && p != 2.0 {
        // A coefficient witness embedded in the right block column gives
        // |rep(a) xi| >= |a_g x|, so the reported lower bound can never
        // fall below the per-coefficient estimates (the sup norm).
        for (&g, m) in &a.coeffs {
            let block = crate::opnorm::opnorm_seeded(m, p, seed)?;
            let embedded = layout.embed_identity_copy(g, &block.witness)?;
            let candidate = crate::opnorm::estimate_from_witness(&rep, embedded, p)?;
            if candidate.value > best.value {
                best = candidate;
            }
        }
    }
    Ok(best)
}

/// `sum_g |a_g|_p`: an upper bound for every crossed-product norm.
pub fn l1_norm(a: &CcElement, p: f64) -> Result<f64> {
    let mut acc = 0.0;
    for m in a.coeffs.values() {
        acc += opnorm_value(m, p)?;
    }
    Ok(acc)
}

/// `max_g |a_g|_p`: a lower bound for the reduced norm.
pub fn sup_norm(a: &CcElement, p: f64) -> Result<f64> {
    let mut acc = 0.0f64;
    for m in a.coeffs.values() {
        acc = acc.max(opnorm_value(m, p)?);
    }
    Ok(acc)
}

/// Recovers the coefficient `E_g(a)` from an operator in the image of the
/// regular representation, with an integrity check across all diagonals.
pub fn coefficient_from_operator(
    layout: &RegularLayout,
    a_op: &OperatorMatrix,
    g: usize,
    tol: f64,
) -> Result<OperatorMatrix> {
    let group = &layout.action.group;
    let n = group.order();
    if a_op.domain != layout.space || a_op.codomain != layout.space {
        return Err(Error::Mismatch { context: "coefficient_from_operator space" });
    }
    // h = g k; read the candidate off the h = 1 block, i.e. k = g^{-1}.
    let e = group.identity();
    let candidate = layout.pi0_extract(&layout.block(a_op, e, group.inv(g)));
    for h in 0..n {
        let k = group.mul(group.inv(g), h);
        let expected = layout.pi0_apply(&layout.action.alpha_inv(h, &candidate)?)?;
        let got = layout.block(a_op, h, k);
        let diff = got.sub(&expected)?.max_abs_entry();
        if diff > tol {
            return Err(Error::Integrity {
                detail: format!(
                    "block ({h}, {k}) deviates by {diff:e}; not in the image of the regular representation"
                ),
            });
        }
    }
    Ok(candidate)
}

/// Standard conditional expectation: the coefficient at the identity.
pub fn conditional_expectation(a: &CcElement) -> OperatorMatrix {
    a.coefficient(a.action.group.identity())
}

/// Dual action of a character `tau` of an abelian group: multiplies the
/// g-th coefficient by `conj(tau(g))`.
pub fn dual_action(a: &CcElement, tau: &[C64]) -> Result<CcElement> {
    let group = &a.action.group;
    validate_character(group, tau)?;
    let coeffs = a.coeffs.iter().map(|(&g, m)| (g, m.scale(tau[g].conj()))).collect();
    Ok(CcElement { action: a.action.clone(), coeffs })
}

pub fn validate_character(group: &FiniteGroup, tau: &[C64]) -> Result<()> {
    if !group.is_abelian() {
        return Err(Error::Invalid { detail: "dual action requires an abelian group".into() });
    }
    if tau.len() != group.order() {
        return Err(Error::ShapeMismatch { context: "character length" });
    }
    for (g, t) in tau.iter().enumerate() {
        if (t.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid {
                detail: format!("character value at {} is not unimodular", group.elements[g]),
            });
        }
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            if (tau[g] * tau[h] - tau[group.mul(g, h)]).norm() > 1e-10 {
                return Err(Error::Invalid { detail: "character is not multiplicative".into() });
            }
        }
    }
    Ok(())
}

/// All characters of a cyclic group of order n: `tau_k(j) = exp(2 pi i k j / n)`.
pub fn cyclic_characters(n: usize) -> Vec<Vec<C64>> {
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let t = 2.0 * core::f64::consts::PI * (k * j % n) as f64 / n as f64;
                    C64::new(t.cos(), t.sin())
                })
                .collect()
        })
        .collect()
}

/// The diagonal `w_tau` on the regular-representation space, with entry
/// `conj(tau(g))` on the `g` block.
pub fn dual_implementer(layout: &RegularLayout, tau: &[C64]) -> Result<OperatorMatrix> {
    validate_character(&layout.action.group, tau)?;
    let d = layout.block_dim;
    let mut out = OperatorMatrix::zero(layout.space.clone(), layout.space.clone());
    for g in 0..layout.action.group.order() {
        for i in 0..d {
            out.set_entry(g * d + i, g * d + i, tau[g].conj());
        }
    }
    Ok(out)
}

/// `L_g(a) = u_g a`: coefficient at h becomes `alpha_g(a_{g^{-1} h})`.
pub fn multiplier_left(g: usize, a: &CcElement) -> Result<CcElement> {
    let group = &a.action.group;
    let mut coeffs = BTreeMap::new();
    for (&h, m) in &a.coeffs {
        coeffs.insert(group.mul(g, h), a.action.alpha(g, m)?);
    }
    Ok(CcElement { action: a.action.clone(), coeffs })
}

/// `R_g(a) = a u_g`: coefficient at h becomes `a_{h g^{-1}}`.
pub fn multiplier_right(g: usize, a: &CcElement) -> Result<CcElement> {
    let group = &a.action.group;
    let mut coeffs = BTreeMap::new();
    for (&h, m) in &a.coeffs {
        coeffs.insert(group.mul(h, g), m.clone());
    }
    Ok(CcElement { action: a.action.clone(), coeffs })
}

/// Isometric action of Z implemented by one weight-preserving spatial
/// bijection of the carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct ZAction {
    carrier: WeightedSpace,
    implementer: SpatialPartialIsometry,
    realized_fwd: OperatorMatrix,
    realized_bwd: OperatorMatrix,
}

impl ZAction {
    pub fn new(carrier: WeightedSpace, implementer: SpatialPartialIsometry) -> Result<Self> {
        if implementer.domain_space() != &carrier || implementer.codomain_space() != &carrier {
            return Err(Error::Mismatch { context: "ZAction carrier" });
        }
        if !implementer.is_bijection() || !implementer.is_weight_preserving() {
            return Err(Error::Invalid {
                detail: "Z implementer must be a weight-preserving bijection".into(),
            });
        }
        let realized_fwd = implementer.realize(1.0)?;
        let realized_bwd = implementer.reverse().realize(1.0)?;
        Ok(Self { carrier, implementer, realized_fwd, realized_bwd })
    }

    pub fn trivial(carrier: WeightedSpace) -> Self {
        let id = SpatialPartialIsometry::identity(carrier.clone());
        Self::new(carrier, id).expect("trivial Z action")
    }

    pub fn carrier(&self) -> &WeightedSpace {
        &self.carrier
    }

    /// `alpha_n(a) = w^n a w^{-n}`.
    pub fn alpha(&self, n: i64, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        let mut out = a.clone();
        if n >= 0 {
            for _ in 0..n {
                out = self.realized_fwd.compose(&out)?.compose(&self.realized_bwd)?;
            }
        } else {
            for _ in 0..(-n) {
                out = self.realized_bwd.compose(&out)?.compose(&self.realized_fwd)?;
            }
        }
        Ok(out)
    }
}

/// Finitely supported element of `C_c(Z, A, alpha)`.
#[derive(Debug, Clone)]
pub struct ZElement {
    pub action: Arc<ZAction>,
    pub coeffs: BTreeMap<i64, OperatorMatrix>,
}

impl ZElement {
    pub fn new(action: Arc<ZAction>, coeffs: BTreeMap<i64, OperatorMatrix>) -> Result<Self> {
        for m in coeffs.values() {
            if m.domain != action.carrier || m.codomain != action.carrier {
                return Err(Error::Mismatch { context: "ZElement coefficient space" });
            }
        }
        Ok(Self { action, coeffs })
    }

    pub fn support_radius(&self) -> i64 {
        self.coeffs.keys().map(|&n| n.abs()).max().unwrap_or(0)
    }
}

/// Report from the finite-section approximation of the reduced norm
/// over Z: certified lower bounds per window plus the l1 upper bound.
#[derive(Debug, Clone)]
pub struct ZWindowReport {
    /// `(window W, norm of the compression to {-W..W} x X)`.
    pub lower_bounds: Vec<(usize, f64)>,
    pub l1_upper: f64,
}

/// Compression of the regular representation of `a` to `{-W..W} x X`,
/// with pi0 the defining representation: block `(h, k)` is
/// `alpha_h^{-1}(a_{h-k})`.
pub fn windowed_z_representation(a: &ZElement, window: usize) -> Result<OperatorMatrix> {
    let radius = a.support_radius();
    if (window as i64) < radius {
        return Err(Error::WindowTooSmall { needed: radius as usize, got: window });
    }
    let w = window as i64;
    let side: Vec<i64> = (-w..=w).collect();
    let labels: Vec<String> = side.iter().map(|n| n.to_string()).collect();
    let z_space =
        WeightedSpace::new(labels, alloc::vec![1.0; side.len()]).expect("window labels distinct");
    let space = tensor_space(&z_space, &a.action.carrier);
    let d = a.action.carrier.dim();
    let mut out = OperatorMatrix::zero(space.clone(), space);
    for (hi, &h) in side.iter().enumerate() {
        for (ki, &k) in side.iter().enumerate() {
            if let Some(m) = a.coeffs.get(&(h - k)) {
                let block = a.action.alpha(-h, m)?;
                for i in 0..d {
                    for j in 0..d {
                        out.set_entry(hi * d + i, ki * d + j, block.entry(i, j));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Window lower bounds (nondecreasing in W) and the l1 upper bound for
/// the reduced norm of a finitely supported element over Z.
pub fn windowed_z_norm(a: &ZElement, p: f64, windows: &[usize]) -> Result<ZWindowReport> {
    let mut lower_bounds = Vec::with_capacity(windows.len());
    let mut prev: Option<usize> = None;
    for &w in windows {
        if let Some(pw) = prev {
            if w <= pw {
                return Err(Error::Invalid {
                    detail: "windows must be strictly increasing".into(),
                });
            }
        }
        prev = Some(w);
        let rep = windowed_z_representation(a, w)?;
        lower_bounds.push((w, opnorm_seeded(&rep, p, DEFAULT_SEED)?.value));
    }
    let mut l1 = 0.0;
    for m in a.coeffs.values() {
        l1 += opnorm_value(m, p)?;
    }
    Ok(ZWindowReport { lower_bounds, l1_upper: l1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(space: &WeightedSpace, rng: &mut rand_chacha::ChaCha8Rng) -> OperatorMatrix {
        OperatorMatrix::from_fn(space.clone(), space.clone(), |_, _| rng::gaussian_c64(rng))
    }

    fn random_element(
        action: &Arc<IsometricAction>,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> CcElement {
        let mut coeffs = BTreeMap::new();
        for g in 0..action.group().order() {
            coeffs.insert(g, random_matrix(action.carrier(), rng));
        }
        CcElement::new(action.clone(), coeffs).unwrap()
    }

    #[test]
    fn group_constructors_satisfy_axioms() {
        for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric_3()] {
            let n = g.order();
            assert_eq!(g.mul(g.identity(), 1), 1);
            for a in 0..n {
                assert_eq!(g.mul(a, g.inv(a)), g.identity());
            }
        }
        assert!(!FiniteGroup::symmetric_3().is_abelian());
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert!(v4.is_abelian());
        assert_eq!(v4.order(), 4);

        // broken table: constant rows are no group
        assert!(FiniteGroup::from_table(
            alloc::vec!["a".into(), "b".into()],
            alloc::vec![0, 0, 0, 0]
        )
        .is_err());
    }

    #[test]
    fn unitaries_multiply_like_the_group() {
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(4)));
        for g in 0..4 {
            for h in 0..4 {
                let ug = CcElement::unitary(action.clone(), g).unwrap();
                let uh = CcElement::unitary(action.clone(), h).unwrap();
                let prod = convolve(&ug, &uh).unwrap();
                let expect = CcElement::unitary(action.clone(), (g + h) % 4).unwrap();
                assert!(prod.sub(&expect).unwrap().max_abs_entry() < 1e-12);
            }
        }
    }

    #[test]
    fn single_term_product_twists_by_alpha() {
        let mut r = rng::stream(11);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let a = random_matrix(action.carrier(), &mut r);
        let b = random_matrix(action.carrier(), &mut r);
        for g in 0..3 {
            for h in 0..3 {
                let x = CcElement::monomial(action.clone(), g, a.clone()).unwrap();
                let y = CcElement::monomial(action.clone(), h, b.clone()).unwrap();
                let prod = convolve(&x, &y).unwrap();
                let expect = a.compose(&action.alpha(g, &b).unwrap()).unwrap();
                assert!(
                    prod.coefficient((g + h) % 3).sub(&expect).unwrap().max_abs_entry() < 1e-12
                );
            }
        }
    }

    #[test]
    fn scalar_convolution_matches_double_loop() {
        let n = 4usize;
        let action = Arc::new(IsometricAction::trivial_scalar(FiniteGroup::cyclic(n)));
        let mut r = rng::stream(5);
        let a = random_element(&action, &mut r);
        let b = random_element(&action, &mut r);
        let prod = convolve(&a, &b).unwrap();
        for g in 0..n {
            let mut expect = c(0.0, 0.0);
            for h in 0..n {
                expect +=
                    a.coefficient(h).entry(0, 0) * b.coefficient((g + n - h) % n).entry(0, 0);
            }
            assert!((prod.coefficient(g).entry(0, 0) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn regular_representation_of_identity_is_identity() {
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let e = action.group().identity();
        let u1 = CcElement::unitary(action.clone(), e).unwrap();
        for pi0 in [Pi0::Identity, Pi0::TwistedSum] {
            let rep = regular_representation(&u1, pi0).unwrap();
            let id = OperatorMatrix::identity(rep.domain.clone());
            assert!(rep.sub(&id).unwrap().max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn z2_swap_block_structure() {
        let action = Arc::new(IsometricAction::trivial_scalar(FiniteGroup::cyclic(2)));
        let u = CcElement::unitary(action.clone(), 1).unwrap();
        let rep = regular_representation(&u, Pi0::Identity).unwrap();
        // 2x2 block swap on l^p(Z_2) (x) C
        let expect = [[0.0, 1.0], [1.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((rep.entry(i, j) - c(expect[i][j], 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn block_extraction_matches_structure_lemma() {
        // t_h (v x pi)(a) s_k = pi0(alpha_h^{-1}(a_{h k^{-1}})), G = Z_3.
        let mut r = rng::stream(20);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let a = random_element(&action, &mut r);
        let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
        let rep = regular_representation_in(&a, &layout).unwrap();
        let group = action.group();
        for h in 0..3 {
            for k in 0..3 {
                let g = group.mul(h, group.inv(k));
                let expect =
                    layout.pi0_apply(&action.alpha_inv(h, &a.coefficient(g)).unwrap()).unwrap();
                let got = layout.block(&rep, h, k);
                assert!(got.sub(&expect).unwrap().max_abs_entry() < 1e-12);
            }
        }
    }

    #[test]
    fn representation_is_multiplicative_and_faithful() {
        let mut r = rng::stream(33);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let a = random_element(&action, &mut r);
        let b = random_element(&action, &mut r);
        let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
        let lhs = regular_representation_in(&convolve(&a, &b).unwrap(), &layout).unwrap();
        let rhs = regular_representation_in(&a, &layout)
            .unwrap()
            .compose(&regular_representation_in(&b, &layout).unwrap())
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-10);

        let zero = CcElement::zero(action.clone());
        let rep = regular_representation_in(&zero, &layout).unwrap();
        assert_eq!(rep.max_abs_entry(), 0.0);
        let rep_a = regular_representation_in(&a, &layout).unwrap();
        assert!(rep_a.max_abs_entry() > 0.0);
    }

    #[test]
    fn reduced_norm_of_single_identity_coefficient() {
        let mut r = rng::stream(41);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let b = random_matrix(action.carrier(), &mut r);
        let e = action.group().identity();
        let a = CcElement::monomial(action.clone(), e, b.clone()).unwrap();
        for p in [1.0, 2.0] {
            let rn = reduced_norm(&a, p).unwrap().value;
            let nb = opnorm_value(&b, p).unwrap();
            assert!((rn - nb).abs() < 1e-10, "p={p}: {rn} vs {nb}");
        }
    }

    #[test]
    fn scalar_p1_reduced_norm_is_l1() {
        let mut r = rng::stream(42);
        for group in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)] {
            let action = Arc::new(IsometricAction::trivial_scalar(group));
            let a = random_element(&action, &mut r);
            let rn = reduced_norm(&a, 1.0).unwrap().value;
            let l1: f64 = (0..action.group().order())
                .map(|g| a.coefficient(g).entry(0, 0).norm())
                .sum();
            assert!((rn - l1).abs() < 1e-9, "{rn} vs {l1}");
        }
    }

    #[test]
    fn z2_scalar_p2_norm_is_circulant_maximum() {
        let action = Arc::new(IsometricAction::trivial_scalar(FiniteGroup::cyclic(2)));
        let mut r = rng::stream(43);
        let c0 = rng::gaussian_c64(&mut r);
        let c1 = rng::gaussian_c64(&mut r);
        let mut coeffs = BTreeMap::new();
        let one = action.carrier().clone();
        coeffs.insert(0, OperatorMatrix::from_fn(one.clone(), one.clone(), |_, _| c0));
        coeffs.insert(1, OperatorMatrix::from_fn(one.clone(), one, |_, _| c1));
        let a = CcElement::new(action, coeffs).unwrap();
        let rn = reduced_norm(&a, 2.0).unwrap().value;
        let expect = (c0 + c1).norm().max((c0 - c1).norm());
        assert!((rn - expect).abs() < 1e-10, "{rn} vs {expect}");
    }

    #[test]
    fn l1_and_sup_norms() {
        let mut r = rng::stream(44);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let b = random_matrix(action.carrier(), &mut r);
        let single = CcElement::monomial(action.clone(), 1, b.clone()).unwrap();
        for p in [1.0, 2.0] {
            let nb = opnorm_value(&b, p).unwrap();
            assert!((l1_norm(&single, p).unwrap() - nb).abs() < 1e-12);
            assert!((sup_norm(&single, p).unwrap() - nb).abs() < 1e-12);
        }
        let a = random_element(&action, &mut r);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let sup = sup_norm(&a, p).unwrap();
            let red = reduced_norm(&a, p).unwrap().value;
            let l1 = l1_norm(&a, p).unwrap();
            assert!(sup <= red + 1e-9, "p={p}: sup {sup} red {red}");
            assert!(red <= l1 + 1e-9, "p={p}: red {red} l1 {l1}");
        }
    }

    #[test]
    fn coefficient_roundtrip_and_contractivity() {
        let mut r = rng::stream(45);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let a = random_element(&action, &mut r);
        let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
        let rep = regular_representation_in(&a, &layout).unwrap();
        for g in 0..3 {
            let got = coefficient_from_operator(&layout, &rep, g, 1e-10).unwrap();
            assert!(got.sub(&a.coefficient(g)).unwrap().max_abs_entry() < 1e-10);
            for p in [1.0, 2.0] {
                let ng = opnorm_value(&got, p).unwrap();
                let rn = reduced_norm(&a, p).unwrap().value;
                assert!(ng <= rn + 1e-9, "p={p} g={g}: {ng} vs {rn}");
            }
        }
        // a perturbed operator is flagged
        let mut bad = rep.clone();
        bad.set_entry(0, 1, bad.entry(0, 1) + c(0.5, 0.0));
        assert!(matches!(
            coefficient_from_operator(&layout, &bad, 0, 1e-10),
            Err(Error::Integrity { .. })
        ));
    }

    #[test]
    fn conditional_expectation_is_bimodular_over_identity_terms() {
        let mut r = rng::stream(46);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let e = action.group().identity();
        let b = random_element(&action, &mut r);
        let am = random_matrix(action.carrier(), &mut r);
        let cm = random_matrix(action.carrier(), &mut r);
        let a = CcElement::monomial(action.clone(), e, am.clone()).unwrap();
        let cc = CcElement::monomial(action.clone(), e, cm.clone()).unwrap();
        let abc = convolve(&convolve(&a, &b).unwrap(), &cc).unwrap();
        let lhs = conditional_expectation(&abc);
        let rhs = am.compose(&conditional_expectation(&b)).unwrap().compose(&cm).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-10);

        // E(b u_1) = b and E(b u_g) = 0 for g != 1
        let single = CcElement::monomial(action.clone(), e, am.clone()).unwrap();
        assert!(conditional_expectation(&single).sub(&am).unwrap().max_abs_entry() < 1e-14);
        let off = CcElement::monomial(action.clone(), 1, am).unwrap();
        assert_eq!(conditional_expectation(&off).max_abs_entry(), 0.0);
    }

    #[test]
    fn dual_action_identities() {
        let mut r = rng::stream(47);
        let group = FiniteGroup::cyclic(4);
        let action = Arc::new(IsometricAction::translation(group));
        let a = random_element(&action, &mut r);
        let chars = cyclic_characters(4);

        // trivial character fixes a
        let fixed = dual_action(&a, &chars[0]).unwrap();
        assert!(fixed.sub(&a).unwrap().max_abs_entry() == 0.0);

        let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
        for tau in &chars {
            // w_tau conjugation identity, entrywise
            let lhs = regular_representation_in(&dual_action(&a, tau).unwrap(), &layout).unwrap();
            let w = dual_implementer(&layout, tau).unwrap();
            let winv =
                dual_implementer(&layout, &tau.iter().map(|t| t.conj()).collect::<Vec<_>>())
                    .unwrap();
            let rhs = w
                .compose(&regular_representation_in(&a, &layout).unwrap())
                .unwrap()
                .compose(&winv)
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-10);

            // norm preservation at p = 2 (exact path)
            let n1 = reduced_norm(&a, 2.0).unwrap().value;
            let n2 = reduced_norm(&dual_action(&a, tau).unwrap(), 2.0).unwrap().value;
            assert!((n1 - n2).abs() < 1e-9);
        }

        // group law of the dual action
        let t1 = &chars[1];
        let t2 = &chars[2];
        let prod: Vec<C64> = (0..4).map(|g| t1[g] * t2[g]).collect();
        let lhs = dual_action(&dual_action(&a, t1).unwrap(), t2).unwrap();
        let rhs = dual_action(&a, &prod).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-12);

        // a non-multiplicative "character" is rejected
        let bad = alloc::vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        assert!(dual_action(&a, &bad).is_err());
    }

    #[test]
    fn multipliers_behave_like_u_g() {
        let mut r = rng::stream(48);
        let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
        let e = action.group().identity();
        let a = random_element(&action, &mut r);
        let b = random_element(&action, &mut r);

        // L_1 = R_1 = id
        assert!(multiplier_left(e, &a).unwrap().sub(&a).unwrap().max_abs_entry() == 0.0);
        assert!(multiplier_right(e, &a).unwrap().sub(&a).unwrap().max_abs_entry() == 0.0);

        // L_g(b u_1) = alpha_g(b) u_g
        let bm = random_matrix(action.carrier(), &mut r);
        let bu1 = CcElement::monomial(action.clone(), e, bm.clone()).unwrap();
        for g in 0..3 {
            let lg = multiplier_left(g, &bu1).unwrap();
            let expect = action.alpha(g, &bm).unwrap();
            assert!(lg.coefficient(g).sub(&expect).unwrap().max_abs_entry() < 1e-12);

            // a L_g(b) = R_g(a) b
            let lhs = convolve(&a, &multiplier_left(g, &b).unwrap()).unwrap();
            let rhs = convolve(&multiplier_right(g, &a).unwrap(), &b).unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-10);

            // multipliers preserve the reduced norm
            for p in [1.0, 2.0] {
                let n0 = reduced_norm(&a, p).unwrap().value;
                let nl = reduced_norm(&multiplier_left(g, &a).unwrap(), p).unwrap().value;
                let nr = reduced_norm(&multiplier_right(g, &a).unwrap(), p).unwrap().value;
                assert!((n0 - nl).abs() < 1e-9, "left p={p} g={g}");
                assert!((n0 - nr).abs() < 1e-9, "right p={p} g={g}");
            }
        }
    }

    #[test]
    fn windowed_z_single_coefficient() {
        let carrier = WeightedSpace::normalized_counting(2);
        let action = Arc::new(ZAction::trivial(carrier.clone()));
        let mut r = rng::stream(49);
        let b =
            OperatorMatrix::from_fn(carrier.clone(), carrier, |_, _| rng::gaussian_c64(&mut r));
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0i64, b.clone());
        let a = ZElement::new(action, coeffs).unwrap();
        for p in [1.0, 2.0] {
            let report = windowed_z_norm(&a, p, &[1, 2, 4]).unwrap();
            let nb = opnorm_value(&b, p).unwrap();
            for &(_, v) in &report.lower_bounds {
                assert!((v - nb).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn windowed_z_scalar_p1_reaches_l1() {
        let carrier = WeightedSpace::counting(1);
        let action = Arc::new(ZAction::trivial(carrier.clone()));
        let mut r = rng::stream(50);
        let mut coeffs = BTreeMap::new();
        let mut l1 = 0.0;
        for n in -2i64..=2 {
            let z = rng::gaussian_c64(&mut r);
            l1 += z.norm();
            coeffs.insert(n, OperatorMatrix::from_fn(carrier.clone(), carrier.clone(), |_, _| z));
        }
        let a = ZElement::new(action, coeffs).unwrap();
        let report = windowed_z_norm(&a, 1.0, &[2, 3, 4, 6]).unwrap();
        // monotone, bounded by l1, and attains it at modest windows
        let vals: Vec<f64> = report.lower_bounds.iter().map(|&(_, v)| v).collect();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
        assert!(vals.iter().all(|&v| v <= report.l1_upper + 1e-9));
        assert!((vals.last().unwrap() - l1).abs() < 1e-10);
    }

    #[test]
    fn windowed_z_bilateral_shift_is_contractive() {
        let carrier = WeightedSpace::counting(1);
        let action = Arc::new(ZAction::trivial(carrier.clone()));
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1i64, OperatorMatrix::identity(carrier));
        let a = ZElement::new(action, coeffs).unwrap();
        let report = windowed_z_norm(&a, 2.0, &[1, 2, 4, 8]).unwrap();
        let vals: Vec<f64> = report.lower_bounds.iter().map(|&(_, v)| v).collect();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
        assert!(vals.iter().all(|&v| v <= 1.0 + 1e-12));
        // window below the support radius is rejected
        assert!(windowed_z_norm(&a, 2.0, &[0]).is_err());
    }
}
