//! The Leavitt algebra `L_d` as a normal-form rewriting algebra.
//!
//! Elements are combinations of monomials `s_mu t_nu` with the relations
//! `t_j s_k = delta_{jk}` and `sum_j s_j t_j = 1`. The normal-form basis
//! drops every monomial whose two words are both nonempty and both end
//! in the letter `d - 1`, expanding it through
//! `s_{mu(d-1)} t_{nu(d-1)} = s_mu t_nu - sum_{j<d-1} s_{mu j} t_{nu j}`.
//! Each expansion strictly shortens one word pair, so rewriting
//! terminates; the fuzz tests exercise confluence through associativity
//! and shuffle invariance.
//!
//! Concrete matrix realizations live on windows `{0..M-1}` with
//! `s_j : delta_m -> delta_{d m + j}` and give certified norm lower
//! bounds for the spatial completion.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::Coeff;
use crate::opnorm::opnorm_seeded;
use crate::space::{OperatorMatrix, WeightedSpace};
use crate::{C64, DEFAULT_SEED};

/// Index word over the alphabet `{0..d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(j: u8) -> Self {
        Word(vec![j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn append(&self, j: u8) -> Self {
        let mut w = self.0.clone();
        w.push(j);
        Word(w)
    }

    fn valid(&self, d: u32) -> bool {
        self.0.iter().all(|&l| (l as u32) < d)
    }
}

/// Normal-form element of the Leavitt algebra `L_d` with coefficients
/// in `C` (floats or Gaussian rationals).
#[derive(Debug, Clone, PartialEq)]
pub struct LeavittElement<C: Coeff> {
    d: u32,
    terms: BTreeMap<(Word, Word), C>,
}

impl<C: Coeff> LeavittElement<C> {
    pub fn zero(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid { detail: "Leavitt algebra needs d >= 2".into() });
        }
        Ok(Self { d, terms: BTreeMap::new() })
    }

    pub fn one(d: u32) -> Result<Self> {
        let mut x = Self::zero(d)?;
        x.accumulate(Word::empty(), Word::empty(), C::one());
        Ok(x)
    }

    /// The generator `s_j`.
    pub fn s(d: u32, j: u8) -> Result<Self> {
        Self::monomial(d, Word::letter(j), Word::empty(), C::one())
    }

    /// The generator `t_j`.
    pub fn t(d: u32, j: u8) -> Result<Self> {
        Self::monomial(d, Word::empty(), Word::letter(j), C::one())
    }

    /// `c s_mu t_nu`, reduced to normal form.
    pub fn monomial(d: u32, mu: Word, nu: Word, c: C) -> Result<Self> {
        let mut x = Self::zero(d)?;
        if !mu.valid(d) || !nu.valid(d) {
            return Err(Error::Invalid { detail: "word letter out of range".into() });
        }
        x.accumulate(mu, nu, c);
        Ok(x)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length appearing in the element.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|(mu, nu)| mu.len().max(nu.len()))
            .max()
            .unwrap_or(0)
    }

    /// Adds `c s_mu t_nu`, expanding out-of-basis monomials. Each
    /// expansion step replaces a monomial by one strictly shorter pair
    /// plus same-length pairs already in the basis, so the queue drains.
    fn accumulate(&mut self, mu: Word, nu: Word, c: C) {
        let last = (self.d - 1) as u8;
        let mut queue = vec![(mu, nu, c)];
        while let Some((mu, nu, c)) = queue.pop() {
            if c.is_zero() {
                continue;
            }
            let out_of_basis = !mu.is_empty()
                && !nu.is_empty()
                && *mu.0.last().unwrap() == last
                && *nu.0.last().unwrap() == last;
            if out_of_basis {
                let mu_short = Word(mu.0[..mu.len() - 1].to_vec());
                let nu_short = Word(nu.0[..nu.len() - 1].to_vec());
                for j in 0..last {
                    queue.push((mu_short.append(j), nu_short.append(j), -c.clone()));
                }
                queue.push((mu_short, nu_short, c));
                continue;
            }
            let key = (mu, nu);
            let merged = match self.terms.remove(&key) {
                Some(existing) => existing + c,
                None => c,
            };
            if !merged.is_zero() {
                self.terms.insert(key, merged);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Mismatch { context: "LeavittElement::add" });
        }
        let mut out = self.clone();
        for ((mu, nu), c) in &other.terms {
            out.accumulate(mu.clone(), nu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self { d: self.d, terms: BTreeMap::new() };
        for ((mu, nu), x) in &self.terms {
            let v = x.clone() * c.clone();
            if !v.is_zero() {
                out.terms.insert((mu.clone(), nu.clone()), v);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&(-C::one())))
    }

    /// Product in `L_d`: cancels `t_nu s_rho` through the common prefix,
    /// then renormalizes.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Mismatch { context: "LeavittElement::multiply" });
        }
        let mut out = Self::zero(self.d)?;
        for ((mu1, nu1), c1) in &self.terms {
            for ((mu2, nu2), c2) in &other.terms {
                let c = c1.clone() * c2.clone();
                let k = nu1.len().min(mu2.len());
                if nu1.0[..k] != mu2.0[..k] {
                    continue;
                }
                if nu1.len() <= mu2.len() {
                    // t_nu1 s_mu2 = s_rest with rest = mu2 minus the prefix
                    let mut mu = mu1.0.clone();
                    mu.extend_from_slice(&mu2.0[k..]);
                    out.accumulate(Word(mu), nu2.clone(), c);
                } else {
                    // t_nu1 s_mu2 = t_rest with rest = nu1 minus the prefix
                    let mut nu = nu2.0.clone();
                    nu.extend_from_slice(&nu1.0[k..]);
                    out.accumulate(mu1.clone(), Word(nu), c);
                }
            }
        }
        Ok(out)
    }

    /// Product of a list of generators, used to spell words.
    pub fn product(d: u32, factors: &[Self]) -> Result<Self> {
        let mut acc = Self::one(d)?;
        for f in factors {
            acc = acc.multiply(f)?;
        }
        Ok(acc)
    }

    pub fn coefficients_c64(&self) -> impl Iterator<Item = (&(Word, Word), C64)> + '_ {
        self.terms.iter().map(|(k, c)| (k, c.to_c64()))
    }

    /// Sum of coefficient moduli: an upper bound for the spatial norm
    /// since each normal-form monomial realizes as a partial isometry.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).sum()
    }
}

/// The unital embedding `omega : M_d -> L_d`, `e_{j,k} -> s_j t_k`.
pub fn omega<C: Coeff>(d: u32, entries: &dyn Fn(u8, u8) -> C) -> Result<LeavittElement<C>> {
    let mut out = LeavittElement::zero(d)?;
    for j in 0..d as u8 {
        for k in 0..d as u8 {
            let c = entries(j, k);
            if !c.is_zero() {
                out = out.add(&LeavittElement::monomial(
                    d,
                    Word::letter(j),
                    Word::letter(k),
                    c,
                )?)?;
            }
        }
    }
    Ok(out)
}

/// `omega` applied to a concrete complex matrix.
pub fn omega_c64(m: &OperatorMatrix) -> Result<LeavittElement<C64>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch { context: "omega_c64" });
    }
    let d = m.domain.dim() as u32;
    omega(d, &|j, k| m.entry(j as usize, k as usize))
}

/// Generator matrices of the base-d spatial representation on the
/// unweighted window `{0..M-1}`: `s_j delta_m = delta_{d m + pi(j)}`,
/// entries dropped once the index leaves the window.
fn generator_matrices(
    d: u32,
    window: usize,
    digit_permutation: &[u8],
) -> (Vec<OperatorMatrix>, Vec<OperatorMatrix>, WeightedSpace) {
    let space = WeightedSpace::counting(window);
    let mut s = Vec::with_capacity(d as usize);
    let mut t = Vec::with_capacity(d as usize);
    for j in 0..d as usize {
        let pj = digit_permutation[j] as usize;
        let mut sm = OperatorMatrix::zero(space.clone(), space.clone());
        let mut tm = OperatorMatrix::zero(space.clone(), space.clone());
        let mut m = 0usize;
        while d as usize * m + pj < window {
            sm.set_entry(d as usize * m + pj, m, C64::new(1.0, 0.0));
            tm.set_entry(m, d as usize * m + pj, C64::new(1.0, 0.0));
            m += 1;
        }
        s.push(sm);
        t.push(tm);
    }
    (s, t, space)
}

/// Base-d spatial representation of an element, compressed to the
/// window `{0..M-1}`. Relations `t_j s_k = delta_{jk}` hold exactly on
/// the sub-window `{0..floor(M/d)-1}`.
pub fn base_d_representation<C: Coeff>(
    x: &LeavittElement<C>,
    window: usize,
    _p: f64,
) -> Result<OperatorMatrix> {
    let idperm: Vec<u8> = (0..x.d as u8).collect();
    alt_representation(x, window, _p, &idperm)
}

/// Same as [`base_d_representation`] with the digits relabeled by a
/// permutation; a cross-check that different spatial representations
/// estimate the same norm.
pub fn alt_representation<C: Coeff>(
    x: &LeavittElement<C>,
    window: usize,
    _p: f64,
    digit_permutation: &[u8],
) -> Result<OperatorMatrix> {
    let d = x.d;
    if window < d as usize {
        return Err(Error::WindowTooSmall { needed: d as usize, got: window });
    }
    if digit_permutation.len() != d as usize {
        return Err(Error::ShapeMismatch { context: "digit permutation" });
    }
    let mut seen = vec![false; d as usize];
    for &j in digit_permutation {
        if (j as u32) >= d || seen[j as usize] {
            return Err(Error::Invalid { detail: "not a digit permutation".into() });
        }
        seen[j as usize] = true;
    }
    let (s, t, space) = generator_matrices(d, window, digit_permutation);
    let mut out = OperatorMatrix::zero(space.clone(), space.clone());
    for ((mu, nu), c) in &x.terms {
        let mut term = OperatorMatrix::identity(space.clone());
        // s_mu = s_{mu_1} ... s_{mu_m}
        for &l in &mu.0 {
            term = term.compose(&s[l as usize])?;
        }
        // t_nu = t_{nu_n} ... t_{nu_1}
        for &l in nu.0.iter().rev() {
            term = term.compose(&t[l as usize])?;
        }
        out = out.add(&term.scale(c.to_c64()))?;
    }
    Ok(out)
}

/// Per-window certified lower bounds and the coefficient-l1 upper bound
/// for the norm of `x` in the spatial completion.
#[derive(Debug, Clone)]
pub struct LeavittNormReport {
    pub lower_bounds: Vec<(usize, f64)>,
    pub l1_upper: f64,
}

pub fn norm_estimate<C: Coeff>(
    x: &LeavittElement<C>,
    p: f64,
    windows: &[usize],
) -> Result<LeavittNormReport> {
    let mut prev: Option<usize> = None;
    let mut lower_bounds = Vec::with_capacity(windows.len());
    for &w in windows {
        if let Some(pw) = prev {
            if w <= pw {
                return Err(Error::Invalid {
                    detail: "windows must be strictly increasing".into(),
                });
            }
        }
        prev = Some(w);
        let rep = base_d_representation(x, w, p)?;
        lower_bounds.push((w, opnorm_seeded(&rep, p, DEFAULT_SEED)?.value));
    }
    Ok(LeavittNormReport { lower_bounds, l1_upper: x.coefficient_l1() })
}
