//! Symbolic algebra behind the stabilized crossed-product picture of the
//! Cuntz algebra on Lp spaces.
//!
//! `B` is spanned by matrix-unit words
//! `e_{j,k} (x) e_{l_1,m_1} (x) ... (x) e_{l_r,m_r} (x) 1_{>r}` with a
//! head over nonnegative integers and a depth-r tail of digit pairs; the
//! shift automorphism `beta` folds digits into and out of the head. The
//! crossed carrier is `sum_n b_n u_n` with
//! `u_m b = beta^m(b) u_m`. Coefficients are exact Gaussian rationals, so
//! the whole identity ledger is checked with zero tolerance. A windowed
//! realization on `{0..M-1} x Z^N` supplies certified norm lower bounds.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{gq_one, Coeff, GaussianRational};
use crate::leavitt::LeavittElement;
use crate::space::{tensor_space, OperatorMatrix, WeightedSpace};
use crate::C64;

/// Matrix-unit word `e_{j,k} (x) e_{l_1,m_1} (x) ... (x) 1_{>r}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BWord {
    pub head: (u64, u64),
    pub tail: Vec<(u8, u8)>,
}

impl BWord {
    pub fn head_only(j: u64, k: u64) -> Self {
        BWord { head: (j, k), tail: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.tail.len()
    }
}

/// Element of `B` at a canonical common depth.
///
/// Raising a depth-r word to depth r+1 replaces it by the sum over
/// `l < d` of the word extended by `(l, l)`; equality of elements is
/// equality at the common (maximal) depth.
#[derive(Debug, Clone)]
pub struct BElement {
    d: u32,
    depth: usize,
    terms: BTreeMap<BWord, GaussianRational>,
}

impl BElement {
    pub fn zero(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid { detail: "stabilized algebra needs d >= 2".into() });
        }
        Ok(Self { d, depth: 0, terms: BTreeMap::new() })
    }

    pub fn from_terms(d: u32, terms: Vec<(BWord, GaussianRational)>) -> Result<Self> {
        let mut out = Self::zero(d)?;
        for (w, c) in terms {
            if w.tail.iter().any(|&(l, m)| (l as u32) >= d || (m as u32) >= d) {
                return Err(Error::Invalid { detail: "tail letter out of range".into() });
            }
            out.insert(w, c);
        }
        Ok(out)
    }

    pub fn word(d: u32, w: BWord) -> Result<Self> {
        Self::from_terms(d, vec![(w, gq_one())])
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> &BTreeMap<BWord, GaussianRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_head(&self) -> u64 {
        self.terms.keys().map(|w| w.head.0.max(w.head.1)).max().unwrap_or(0)
    }

    fn insert(&mut self, w: BWord, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        if w.depth() > self.depth {
            self.raise_to(w.depth());
        }
        let mut expanded = vec![(w, c)];
        while expanded[0].0.depth() < self.depth {
            let d = self.d as u8;
            let mut next = Vec::with_capacity(expanded.len() * d as usize);
            for (w, c) in expanded {
                for l in 0..d {
                    let mut t = w.tail.clone();
                    t.push((l, l));
                    next.push((BWord { head: w.head, tail: t }, c.clone()));
                }
            }
            expanded = next;
        }
        for (w, c) in expanded {
            let merged = match self.terms.remove(&w) {
                Some(existing) => existing + c,
                None => c,
            };
            if !merged.is_zero() {
                self.terms.insert(w, merged);
            }
        }
    }

    fn raise_to(&mut self, depth: usize) {
        while self.depth < depth {
            let d = self.d as u8;
            let mut next = BTreeMap::new();
            for (w, c) in core::mem::take(&mut self.terms) {
                for l in 0..d {
                    let mut t = w.tail.clone();
                    t.push((l, l));
                    next.insert(BWord { head: w.head, tail: t }, c.clone());
                }
            }
            self.terms = next;
            self.depth += 1;
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Mismatch { context: "BElement::add" });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            for (w, x) in &self.terms {
                let v = x.clone() * c.clone();
                if !v.is_zero() {
                    terms.insert(w.clone(), v);
                }
            }
        }
        Self { d: self.d, depth: self.depth, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-gq_one()))
    }
}

impl PartialEq for BElement {
    fn eq(&self, other: &Self) -> bool {
        if self.d != other.d {
            return false;
        }
        let depth = self.depth.max(other.depth);
        let mut a = self.clone();
        let mut b = other.clone();
        a.raise_to(depth);
        b.raise_to(depth);
        a.terms == b.terms
    }
}

/// `beta(b) = v b v^{-1}`: splits the head digits into a new leading
/// tail slot. On a word with head `(d j0 + l0, d k0 + m0)` the image has
/// head `(j0, k0)` and tail `(l0, m0), ...`, one level deeper.
pub fn beta(b: &BElement) -> BElement {
    let d = b.d as u64;
    let mut out = BElement::zero(b.d).expect("valid d");
    for (w, c) in &b.terms {
        let (j, k) = w.head;
        let mut tail = vec![((j % d) as u8, (k % d) as u8)];
        tail.extend_from_slice(&w.tail);
        out.insert(BWord { head: (j / d, k / d), tail }, c.clone());
    }
    out
}

/// `beta^{-1}(b) = v^{-1} b v`: absorbs the leading tail slot into the
/// head, `(j, k)` with first tail entry `(l_1, m_1)` becoming
/// `(d j + l_1, d k + m_1)`. Depth-0 elements are raised first.
pub fn beta_inv(b: &BElement) -> BElement {
    let d = b.d as u64;
    let mut src = b.clone();
    if src.depth == 0 {
        src.raise_to(1);
    }
    let mut out = BElement::zero(b.d).expect("valid d");
    for (w, c) in &src.terms {
        let (j, k) = w.head;
        let (l1, m1) = w.tail[0];
        out.insert(
            BWord { head: (d * j + l1 as u64, d * k + m1 as u64), tail: w.tail[1..].to_vec() },
            c.clone(),
        );
    }
    out
}

pub fn beta_pow(n: i64, b: &BElement) -> BElement {
    let mut out = b.clone();
    if n >= 0 {
        for _ in 0..n {
            out = beta(&out);
        }
    } else {
        for _ in 0..(-n) {
            out = beta_inv(&out);
        }
    }
    out
}

/// Matrix-unit multiplication in `B` at the common depth: inner indices
/// match componentwise or the product of two words is zero.
pub fn b_multiply(a: &BElement, b: &BElement) -> Result<BElement> {
    if a.d != b.d {
        return Err(Error::Mismatch { context: "b_multiply" });
    }
    let depth = a.depth.max(b.depth);
    let mut x = a.clone();
    let mut y = b.clone();
    x.raise_to(depth);
    y.raise_to(depth);
    let mut out = BElement::zero(a.d)?;
    out.raise_to(depth);
    for (wa, ca) in &x.terms {
        for (wb, cb) in &y.terms {
            if wa.head.1 != wb.head.0 {
                continue;
            }
            if wa.tail.iter().zip(&wb.tail).any(|(&(_, m), &(l, _))| m != l) {
                continue;
            }
            let tail = wa
                .tail
                .iter()
                .zip(&wb.tail)
                .map(|(&(l, _), &(_, m))| (l, m))
                .collect();
            out.insert(
                BWord { head: (wa.head.0, wb.head.1), tail },
                ca.clone() * cb.clone(),
            );
        }
    }
    Ok(out)
}

/// `f_n = sum_{m < d^n} e_{m,m} (x) 1_{>0}`.
pub fn f(d: u32, n: u32) -> Result<BElement> {
    let count = (d as u64).checked_pow(n).ok_or(Error::Invalid {
        detail: "d^n overflows the head range".into(),
    })?;
    let terms = (0..count).map(|m| (BWord::head_only(m, m), gq_one())).collect();
    BElement::from_terms(d, terms)
}

/// Finitely supported `sum_n b_n u_n` in the Z-crossed extension of `B`.
///
/// `u_n` itself is never materialized (B has no unit); left and right
/// multiplications by it act as the multiplier maps below.
#[derive(Debug, Clone)]
pub struct CrossedElement {
    d: u32,
    coeffs: BTreeMap<i64, BElement>,
}

impl CrossedElement {
    pub fn zero(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid { detail: "stabilized algebra needs d >= 2".into() });
        }
        Ok(Self { d, coeffs: BTreeMap::new() })
    }

    pub fn monomial(n: i64, b: BElement) -> Self {
        let mut coeffs = BTreeMap::new();
        let d = b.d;
        if !b.is_zero() {
            coeffs.insert(n, b);
        }
        Self { d, coeffs }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BElement> {
        &self.coeffs
    }

    /// Coefficient extraction `E_n`.
    pub fn coefficient(&self, n: i64) -> BElement {
        self.coeffs.get(&n).cloned().unwrap_or_else(|| BElement::zero(self.d).expect("valid d"))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|b| b.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Mismatch { context: "CrossedElement::add" });
        }
        let mut coeffs = self.coeffs.clone();
        for (&n, b) in &other.coeffs {
            let merged = match coeffs.remove(&n) {
                Some(existing) => existing.add(b)?,
                None => b.clone(),
            };
            if !merged.is_zero() {
                coeffs.insert(n, merged);
            }
        }
        Ok(Self { d: self.d, coeffs })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, b)| (n, b.scale(c)))
            .filter(|(_, b)| !b.is_zero())
            .collect();
        Self { d: self.d, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-gq_one()))
    }
}

impl PartialEq for CrossedElement {
    fn eq(&self, other: &Self) -> bool {
        if self.d != other.d {
            return false;
        }
        let keys: alloc::collections::BTreeSet<i64> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter().all(|n| self.coefficient(n) == other.coefficient(n))
    }
}

/// `(sum a_m u_m)(sum b_n u_n) = sum a_m beta^m(b_n) u_{m+n}`.
pub fn x_multiply(a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement> {
    if a.d != b.d {
        return Err(Error::Mismatch { context: "x_multiply" });
    }
    let mut out = CrossedElement::zero(a.d)?;
    for (&m, am) in &a.coeffs {
        for (&n, bn) in &b.coeffs {
            let term = b_multiply(am, &beta_pow(m, bn))?;
            out = out.add(&CrossedElement::monomial(m + n, term))?;
        }
    }
    Ok(out)
}

/// `u_m x` as a multiplier: coefficients shift by m and twist by beta^m.
pub fn u_left(m: i64, x: &CrossedElement) -> CrossedElement {
    let coeffs = x
        .coeffs
        .iter()
        .map(|(&n, b)| (m + n, beta_pow(m, b)))
        .filter(|(_, b)| !b.is_zero())
        .collect();
    CrossedElement { d: x.d, coeffs }
}

/// `x u_m` as a multiplier: coefficients shift by m.
pub fn u_right(x: &CrossedElement, m: i64) -> CrossedElement {
    let coeffs = x.coeffs.iter().map(|(&n, b)| (n + m, b.clone())).collect();
    CrossedElement { d: x.d, coeffs }
}

/// `Ad(u_m)(x) = u_m x u_{-m}`: beta^m on coefficients, positions fixed.
pub fn ad_u(m: i64, x: &CrossedElement) -> CrossedElement {
    u_right(&u_left(m, x), -m)
}

/// Generator images of the corner embedding:
/// `sigma(s_j) = u_1 (e_{j,0} (x) 1)` and `sigma(t_j) = (e_{0,j} (x) 1) u_{-1}`.
pub fn sigma_s(d: u32, j: u8) -> Result<CrossedElement> {
    let b = BElement::word(d, BWord::head_only(j as u64, 0))?;
    Ok(u_left(1, &CrossedElement::monomial(0, b)))
}

pub fn sigma_t(d: u32, j: u8) -> Result<CrossedElement> {
    let b = BElement::word(d, BWord::head_only(0, j as u64))?;
    Ok(u_right(&CrossedElement::monomial(0, b), -1))
}

/// `sigma(1) = f_0 u_0`, the unit of the corner.
pub fn sigma_one(d: u32) -> Result<CrossedElement> {
    Ok(CrossedElement::monomial(0, f(d, 0)?))
}

/// The corner embedding on normal-form elements, extended
/// multiplicatively: `sigma(s_mu t_nu) = sigma(s_mu) sigma(t_nu)`.
pub fn sigma(x: &LeavittElement<GaussianRational>) -> Result<CrossedElement> {
    let d = x.d();
    let mut out = CrossedElement::zero(d)?;
    for ((mu, nu), c) in x.terms() {
        let mut acc = sigma_one(d)?;
        for &l in &mu.0 {
            acc = x_multiply(&acc, &sigma_s(d, l)?)?;
        }
        for &l in nu.0.iter().rev() {
            acc = x_multiply(&acc, &sigma_t(d, l)?)?;
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

/// Element of `(M^p_d)^{(x) slots} (x) O_d^p` in symbolic form: matrix
/// unit words tensored with Leavitt normal forms.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorLeavitt {
    d: u32,
    slots: usize,
    terms: BTreeMap<Vec<(u8, u8)>, LeavittElement<GaussianRational>>,
}

impl TensorLeavitt {
    pub fn scalar(x: LeavittElement<GaussianRational>) -> Self {
        let d = x.d();
        let mut terms = BTreeMap::new();
        if !x.is_zero() {
            terms.insert(Vec::new(), x);
        }
        Self { d, slots: 0, terms }
    }

    pub fn zero(d: u32, slots: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid { detail: "tensor algebra needs d >= 2".into() });
        }
        Ok(Self { d, slots, terms: BTreeMap::new() })
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn terms(&self) -> &BTreeMap<Vec<(u8, u8)>, LeavittElement<GaussianRational>> {
        &self.terms
    }

    fn insert(&mut self, word: Vec<(u8, u8)>, x: &LeavittElement<GaussianRational>) {
        if x.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&word) {
            Some(existing) => existing.add(x).expect("same d"),
            None => x.clone(),
        };
        if !merged.is_zero() {
            self.terms.insert(word, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d || self.slots != other.slots {
            return Err(Error::Mismatch { context: "TensorLeavitt::add" });
        }
        let mut out = self.clone();
        for (w, x) in &other.terms {
            out.insert(w.clone(), x);
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.d != other.d || self.slots != other.slots {
            return Err(Error::Mismatch { context: "TensorLeavitt::multiply" });
        }
        let mut out = Self::zero(self.d, self.slots)?;
        for (wa, xa) in &self.terms {
            for (wb, xb) in &other.terms {
                if wa.iter().zip(wb).any(|(&(_, k), &(j, _))| k != j) {
                    continue;
                }
                let word = wa.iter().zip(wb).map(|(&(j, _), &(_, k))| (j, k)).collect();
                out.insert(word, &xa.multiply(xb)?);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `epsilon_n(a) = e_{0,0} (x) a`: prepends a `(0,0)` matrix-unit slot.
pub fn epsilon(a: &TensorLeavitt) -> TensorLeavitt {
    let mut out = TensorLeavitt { d: a.d, slots: a.slots + 1, terms: BTreeMap::new() };
    for (w, x) in &a.terms {
        let mut word = Vec::with_capacity(w.len() + 1);
        word.push((0u8, 0u8));
        word.extend_from_slice(w);
        out.insert(word, x);
    }
    out
}

/// `psi_0` on generators: `s_j -> sum_l e_{j,l} (x) s_l` and
/// `t_j -> sum_l e_{l,j} (x) t_l`; extended multiplicatively to normal
/// forms, landing in one more tensor slot.
pub fn psi(a: &TensorLeavitt) -> Result<TensorLeavitt> {
    let d = a.d;
    let psi_one = {
        let mut out = TensorLeavitt::zero(d, 1)?;
        for l in 0..d as u8 {
            out.insert(vec![(l, l)], &LeavittElement::one(d)?);
        }
        out
    };
    let psi_s = |j: u8| -> Result<TensorLeavitt> {
        let mut out = TensorLeavitt::zero(d, 1)?;
        for l in 0..d as u8 {
            out.insert(vec![(j, l)], &LeavittElement::s(d, l)?);
        }
        Ok(out)
    };
    let psi_t = |j: u8| -> Result<TensorLeavitt> {
        let mut out = TensorLeavitt::zero(d, 1)?;
        for l in 0..d as u8 {
            out.insert(vec![(l, j)], &LeavittElement::t(d, l)?);
        }
        Ok(out)
    };
    let mut out = TensorLeavitt::zero(d, a.slots + 1)?;
    for (w, x) in &a.terms {
        for ((mu, nu), c) in x.terms() {
            let mut acc = psi_one.clone();
            for &l in &mu.0 {
                acc = acc.multiply(&psi_s(l)?)?;
            }
            for &l in nu.0.iter().rev() {
                acc = acc.multiply(&psi_t(l)?)?;
            }
            for (unit, y) in &acc.terms {
                let mut word = w.clone();
                word.extend_from_slice(unit);
                out.insert(word, &y.scale(c));
            }
        }
    }
    Ok(out)
}

/// `psi^{-1}` absorbing the last slot: `(..., e_{j,k}) (x) a -> ... (x) s_j a t_k`.
pub fn psi_inv(a: &TensorLeavitt) -> Result<TensorLeavitt> {
    if a.slots == 0 {
        return Err(Error::Invalid { detail: "psi_inv needs at least one slot".into() });
    }
    let d = a.d;
    let mut out = TensorLeavitt::zero(d, a.slots - 1)?;
    for (w, x) in &a.terms {
        let (j, k) = *w.last().unwrap();
        let s = LeavittElement::s(d, j)?;
        let t = LeavittElement::t(d, k)?;
        out.insert(w[..w.len() - 1].to_vec(), &s.multiply(x)?.multiply(&t)?);
    }
    Ok(out)
}

/// `sigma_n = Ad(u_{-n}) . sigma . psi_0^{-1} . ... . psi_{n-1}^{-1}`
/// mapping `(M^p_d)^{(x) n} (x) O_d^p` into the crossed carrier.
pub fn sigma_n(a: &TensorLeavitt) -> Result<CrossedElement> {
    let n = a.slots;
    let mut x = a.clone();
    for _ in 0..n {
        x = psi_inv(&x)?;
    }
    let collapsed = x
        .terms
        .get(&Vec::new())
        .cloned()
        .unwrap_or(LeavittElement::zero(a.d)?);
    Ok(ad_u(-(n as i64), &sigma(&collapsed)?))
}

/// Windowed realization of a crossed element on `{0..M-1} x Z^N` with
/// counting (x) normalized-counting weights.
///
/// Words act as matrix units; `u_n` acts as the n-th power of the
/// compressed shift, which drops transitions exiting the window. The
/// result certifies lower bounds; on interior columns (head below M/d,
/// depths below N) the conjugation identities hold exactly.
pub struct Realizer {
    d: u32,
    window: usize,
    depth: usize,
    p: f64,
    pub space: WeightedSpace,
    shift_fwd: OperatorMatrix,
    shift_bwd: OperatorMatrix,
}

impl Realizer {
    pub fn new(d: u32, window: usize, depth: usize, p: f64) -> Result<Self> {
        if window < d as usize {
            return Err(Error::WindowTooSmall { needed: d as usize, got: window });
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::BadExponent { p, context: "Realizer" });
        }
        let mut tail = WeightedSpace::counting(1);
        for _ in 0..depth {
            tail = tensor_space(&tail, &WeightedSpace::normalized_counting(d as usize));
        }
        let space = tensor_space(&WeightedSpace::counting(window), &tail);
        let mut r = Self {
            d,
            window,
            depth,
            p,
            space: space.clone(),
            shift_fwd: OperatorMatrix::zero(space.clone(), space.clone()),
            shift_bwd: OperatorMatrix::zero(space.clone(), space),
        };
        r.shift_fwd = r.build_shift_fwd();
        r.shift_bwd = r.build_shift_bwd();
        Ok(r)
    }

    fn atom(&self, head: usize, tail: &[u8]) -> usize {
        let mut idx = head;
        for &k in tail {
            idx = idx * self.d as usize + k as usize;
        }
        idx
    }

    fn decode(&self, mut idx: usize) -> (usize, Vec<u8>) {
        let mut tail = vec![0u8; self.depth];
        for i in (0..self.depth).rev() {
            tail[i] = (idx % self.d as usize) as u8;
            idx /= self.d as usize;
        }
        (idx, tail)
    }

    /// Compression of the shift `v`: folds the head digit into the tail
    /// and drops the deepest tail digit via the canonical projection.
    fn build_shift_fwd(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zero(self.space.clone(), self.space.clone());
        let d = self.d as usize;
        let factor = (d as f64).powf(1.0 / self.p - 1.0);
        for col in 0..self.space.dim() {
            let (m, tail) = self.decode(col);
            let mut new_tail = Vec::with_capacity(self.depth);
            if self.depth > 0 {
                new_tail.push((m % d) as u8);
                new_tail.extend_from_slice(&tail[..self.depth - 1]);
            }
            let row = self.atom(m / d, &new_tail);
            let v = out.entry(row, col) + C64::new(factor, 0.0);
            out.set_entry(row, col, v);
        }
        out
    }

    /// Compression of `v^{-1}`: absorbs the first tail digit into the
    /// head and spreads over the vacated deepest digit.
    fn build_shift_bwd(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zero(self.space.clone(), self.space.clone());
        let d = self.d as usize;
        let factor = (d as f64).powf(-1.0 / self.p);
        for col in 0..self.space.dim() {
            let (m, tail) = self.decode(col);
            if self.depth == 0 {
                if d * m < self.window {
                    let row = self.atom(d * m, &[]);
                    out.set_entry(row, col, C64::new(d as f64 * factor, 0.0));
                }
                continue;
            }
            let head = d * m + tail[0] as usize;
            if head >= self.window {
                continue;
            }
            for l in 0..d as u8 {
                let mut new_tail = tail[1..].to_vec();
                new_tail.push(l);
                let row = self.atom(head, &new_tail);
                let v = out.entry(row, col) + C64::new(factor, 0.0);
                out.set_entry(row, col, v);
            }
        }
        out
    }

    pub fn shift(&self) -> &OperatorMatrix {
        &self.shift_fwd
    }

    pub fn shift_inverse(&self) -> &OperatorMatrix {
        &self.shift_bwd
    }

    /// Realizes one element of `B` as a matrix-unit sum.
    pub fn realize_b(&self, b: &BElement) -> Result<OperatorMatrix> {
        if b.d != self.d {
            return Err(Error::Mismatch { context: "Realizer::realize_b" });
        }
        if b.depth() > self.depth {
            return Err(Error::WindowTooSmall { needed: b.depth(), got: self.depth });
        }
        if b.max_head() >= self.window as u64 {
            return Err(Error::WindowTooSmall {
                needed: b.max_head() as usize + 1,
                got: self.window,
            });
        }
        let free = self.depth - b.depth();
        let free_dims = (self.d as usize).pow(free as u32);
        let mut out = OperatorMatrix::zero(self.space.clone(), self.space.clone());
        for (w, c) in &b.terms {
            let cv = c.to_c64();
            for suffix_code in 0..free_dims {
                let mut suffix = vec![0u8; free];
                let mut x = suffix_code;
                for i in (0..free).rev() {
                    suffix[i] = (x % self.d as usize) as u8;
                    x /= self.d as usize;
                }
                let mut col_tail: Vec<u8> = w.tail.iter().map(|&(_, m)| m).collect();
                col_tail.extend_from_slice(&suffix);
                let mut row_tail: Vec<u8> = w.tail.iter().map(|&(l, _)| l).collect();
                row_tail.extend_from_slice(&suffix);
                let col = self.atom(w.head.1 as usize, &col_tail);
                let row = self.atom(w.head.0 as usize, &row_tail);
                let v = out.entry(row, col) + cv;
                out.set_entry(row, col, v);
            }
        }
        Ok(out)
    }

    /// Realizes `u_n` as the n-th power of the compressed shift.
    pub fn realize_u(&self, n: i64) -> OperatorMatrix {
        let mut out = OperatorMatrix::identity(self.space.clone());
        if n >= 0 {
            for _ in 0..n {
                out = self.shift_fwd.compose(&out).expect("same space");
            }
        } else {
            for _ in 0..(-n) {
                out = self.shift_bwd.compose(&out).expect("same space");
            }
        }
        out
    }

    /// Realizes `sum_n b_n u_n`. The window must be divisible by
    /// `d^max|n|` so the shift powers partition it cleanly.
    pub fn realize(&self, x: &CrossedElement) -> Result<OperatorMatrix> {
        if x.d != self.d {
            return Err(Error::Mismatch { context: "Realizer::realize" });
        }
        let nmax = x.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0) as u32;
        let align = (self.d as usize).pow(nmax);
        if self.window % align != 0 {
            return Err(Error::Invalid {
                detail: format!(
                    "window {} is not divisible by d^{nmax} = {align}",
                    self.window
                ),
            });
        }
        let mut out = OperatorMatrix::zero(self.space.clone(), self.space.clone());
        for (&n, b) in &x.coeffs {
            let term = self.realize_b(b)?.compose(&self.realize_u(n))?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Columns on which one conjugation by the compressed shift is
    /// exact: head index m with `d(m + 1) <= window`.
    pub fn interior_columns(&self) -> impl Iterator<Item = usize> + '_ {
        let d = self.d as usize;
        (0..self.space.dim()).filter(move |&col| {
            let (m, _) = self.decode(col);
            d * (m + 1) <= self.window
        })
    }
}

/// One named line of the exact identity ledger.
#[derive(Debug, Clone)]
pub struct LedgerLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn line(name: &str, pass: bool, detail: String) -> LedgerLine {
    LedgerLine { name: name.into(), pass, detail }
}

fn eq_line(name: &str, lhs: &CrossedElement, rhs: &CrossedElement) -> LedgerLine {
    let pass = lhs == rhs;
    line(name, pass, if pass { "exact".into() } else { "elements differ".into() })
}

fn eq_line_b(name: &str, lhs: &BElement, rhs: &BElement) -> LedgerLine {
    let pass = lhs == rhs;
    line(name, pass, if pass { "exact".into() } else { "elements differ".into() })
}

/// Runs the full exact identity ledger for one value of d.
///
/// Covers the idempotents `f_n`, the shift action on them, the Leavitt
/// relations for the sigma images, the corner identities, and the
/// multiplier expansions of `u_n f_0` and `f_0 u_{-n}`.
pub fn identity_ledger(d: u32) -> Result<Vec<LedgerLine>> {
    let mut out = Vec::new();

    for n in 0..=3u32 {
        let fn_ = f(d, n)?;
        out.push(eq_line_b(
            &format!("f_{n} is idempotent (d={d})"),
            &b_multiply(&fn_, &fn_)?,
            &fn_,
        ));
    }
    for n in 0..=2u32 {
        let fn_ = f(d, n)?;
        let fn1 = f(d, n + 1)?;
        out.push(eq_line_b(
            &format!("f_{n} f_{} = f_{n} (d={d})", n + 1),
            &b_multiply(&fn_, &fn1)?,
            &fn_,
        ));
        out.push(eq_line_b(
            &format!("f_{} f_{n} = f_{n} (d={d})", n + 1),
            &b_multiply(&fn1, &fn_)?,
            &fn_,
        ));
    }
    for n in 0..=3u32 {
        out.push(eq_line_b(
            &format!("beta_inv(f_{n}) = f_{} (d={d})", n + 1),
            &beta_inv(&f(d, n)?),
            &f(d, n + 1)?,
        ));
    }

    // beta round trip and the head-splitting example
    {
        let w = BElement::word(d, BWord::head_only(0, 0))?;
        let split = beta(&w);
        let expect = BElement::from_terms(
            d,
            vec![(BWord { head: (0, 0), tail: vec![(0, 0)] }, gq_one())],
        )?;
        out.push(eq_line_b(
            &format!("beta(e_00 (x) 1) splits the head (d={d})"),
            &split,
            &expect,
        ));
        out.push(eq_line_b(
            &format!("beta_inv . beta = id on e_00 (d={d})"),
            &beta_inv(&beta(&w)),
            &w,
        ));
    }

    // Leavitt relations for the sigma generator images
    let one = sigma_one(d)?;
    for j in 0..d as u8 {
        for k in 0..d as u8 {
            let prod = x_multiply(&sigma_t(d, j)?, &sigma_s(d, k)?)?;
            let expect =
                if j == k { one.clone() } else { CrossedElement::zero(d)? };
            out.push(eq_line(
                &format!("sigma(t_{j}) sigma(s_{k}) = delta f_0 (d={d})"),
                &prod,
                &expect,
            ));
        }
    }
    {
        let mut acc = CrossedElement::zero(d)?;
        for j in 0..d as u8 {
            acc = acc.add(&x_multiply(&sigma_s(d, j)?, &sigma_t(d, j)?)?)?;
        }
        out.push(eq_line(
            &format!("sum_j sigma(s_j) sigma(t_j) = f_0 (d={d})"),
            &acc,
            &one,
        ));
    }

    // sigma(s_j t_k) = (e_00 (x) e_jk (x) 1) u_0
    for j in 0..d as u8 {
        for k in 0..d as u8 {
            let lhs = x_multiply(&sigma_s(d, j)?, &sigma_t(d, k)?)?;
            let word = BWord { head: (0, 0), tail: vec![(j, k)] };
            let rhs = CrossedElement::monomial(0, BElement::word(d, word)?);
            out.push(eq_line(
                &format!("sigma(s_{j} t_{k}) = e_00 (x) e_{j}{k} (x) 1 (d={d})"),
                &lhs,
                &rhs,
            ));
        }
    }

    // u_1 b u_{-1} = beta(b) through the multiplier maps
    {
        let b = BElement::word(d, BWord { head: (1, 0), tail: vec![(0, 1)] })?;
        let lhs = ad_u(1, &CrossedElement::monomial(0, b.clone()));
        let rhs = CrossedElement::monomial(0, beta(&b));
        out.push(eq_line(&format!("u_1 b u_-1 = beta(b) (d={d})"), &lhs, &rhs));
    }

    // u_n f_0 = f_0 (u_1 f_0)^n and f_0 u_{-n} = (f_0 u_{-1})^n f_0
    let f0 = CrossedElement::monomial(0, f(d, 0)?);
    for n in 1..=3i64 {
        let lhs = u_left(n, &f0);
        let step = u_left(1, &f0);
        let mut rhs = f0.clone();
        for _ in 0..n {
            rhs = x_multiply(&rhs, &step)?;
        }
        out.push(eq_line(&format!("u_{n} f_0 = f_0 (u_1 f_0)^{n} (d={d})"), &lhs, &rhs));

        let lhs = u_right(&f0, -n);
        let step = u_right(&f0, -1);
        let mut rhs = step.clone();
        for _ in 1..n {
            rhs = x_multiply(&rhs, &step)?;
        }
        rhs = x_multiply(&rhs, &f0)?;
        out.push(eq_line(
            &format!("f_0 u_-{n} = (f_0 u_-1)^{n} f_0 (d={d})"),
            &lhs,
            &rhs,
        ));
    }

    // corner absorption f_0 sigma(x) f_0 = sigma(x) on generator words
    for j in 0..d as u8 {
        let gen = sigma_s(d, j)?;
        let corner = x_multiply(&x_multiply(&one, &gen)?, &one)?;
        out.push(eq_line(&format!("f_0 sigma(s_{j}) f_0 = sigma(s_{j}) (d={d})"), &corner, &gen));
        let gen = sigma_t(d, j)?;
        let corner = x_multiply(&x_multiply(&one, &gen)?, &one)?;
        out.push(eq_line(&format!("f_0 sigma(t_{j}) f_0 = sigma(t_{j}) (d={d})"), &corner, &gen));
    }
    {
        let st = x_multiply(&sigma_s(d, 0)?, &sigma_t(d, d as u8 - 1)?)?;
        let corner = x_multiply(&x_multiply(&one, &st)?, &one)?;
        out.push(eq_line(
            &format!("f_0 sigma(s_0 t_{}) f_0 = sigma(s_0 t_{}) (d={d})", d - 1, d - 1),
            &corner,
            &st,
        ));
    }

    // sigma respects the Leavitt rewriting: sum_j s_j t_j = 1 maps to f_0
    {
        let mut acc = LeavittElement::zero(d)?;
        for j in 0..d as u8 {
            acc = acc.add(
                &LeavittElement::s(d, j)?.multiply(&LeavittElement::t(d, j)?)?,
            )?;
        }
        out.push(eq_line(
            &format!("sigma(sum_j s_j t_j) = f_0 (d={d})"),
            &sigma(&acc)?,
            &one,
        ));
    }

    // sigma_{n+1} . epsilon_n = sigma_n on generators, n = 0, 1
    for n in 0..=1usize {
        for j in 0..d as u8 {
            for gen in [
                TensorLeavitt::scalar(LeavittElement::s(d, j)?),
                TensorLeavitt::scalar(LeavittElement::t(d, j)?),
            ] {
                let mut lifted = gen.clone();
                for _ in 0..n {
                    lifted = psi(&lifted)?;
                }
                let lhs = sigma_n(&epsilon(&lifted))?;
                let rhs = sigma_n(&lifted)?;
                out.push(eq_line(
                    &format!("sigma_{} . epsilon_{n} = sigma_{n} on generator (d={d})", n + 1),
                    &lhs,
                    &rhs,
                ));
            }
        }
    }

    // epsilon_0(1) = e_00 (x) 1
    {
        let one = TensorLeavitt::scalar(LeavittElement::one(d)?);
        let lifted = epsilon(&one);
        let mut expect = TensorLeavitt::zero(d, 1)?;
        expect.insert(vec![(0, 0)], &LeavittElement::one(d)?);
        out.push(line(
            &format!("epsilon_0(1) = e_00 (x) 1 (d={d})"),
            lifted == expect,
            if lifted == expect { "exact".into() } else { "images differ".into() },
        ));
    }

    // psi_0(s_j) has the expected generator images, and psi_inv undoes psi
    for j in 0..d as u8 {
        let s = TensorLeavitt::scalar(LeavittElement::s(d, j)?);
        let img = psi(&s)?;
        let mut expect = TensorLeavitt::zero(d, 1)?;
        for l in 0..d as u8 {
            let mut t = TensorLeavitt::zero(d, 1)?;
            t.insert(vec![(j, l)], &LeavittElement::s(d, l)?);
            expect = expect.add(&t)?;
        }
        out.push(line(
            &format!("psi_0(s_{j}) = sum_l e_{j}l (x) s_l (d={d})"),
            img == expect,
            if img == expect { "exact".into() } else { "images differ".into() },
        ));
        let back = psi_inv(&img)?;
        out.push(line(
            &format!("psi_inv . psi = id on s_{j} (d={d})"),
            back == s,
            if back == s { "exact".into() } else { "round trip failed".into() },
        ));
    }

    Ok(out)
}
