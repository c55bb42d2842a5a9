//! Exact K-theory arithmetic: the ring `Z[1/d]`, K_0 classes of concrete
//! idempotents at declared finite levels, and the Pimsner-Voiculescu
//! kernel/cokernel computation that yields `K_0 = Z/(d-1)Z` and
//! `K_1 = 0` for the Lp Cuntz algebra.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::leavitt::LeavittElement;
use crate::space::OperatorMatrix;

/// Exact element `numerator / d^exponent` of `Z[1/d]`, kept canonical:
/// `d` never divides the numerator unless the exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedInt {
    numerator: BigInt,
    exponent: u32,
    base: u32,
}

impl LocalizedInt {
    pub fn new(numerator: BigInt, exponent: u32, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::Invalid { detail: "localization base must be >= 2".into() });
        }
        let mut out = Self { numerator, exponent, base };
        out.canonicalize();
        Ok(out)
    }

    pub fn integer(n: i64, base: u32) -> Result<Self> {
        Self::new(BigInt::from(n), 0, base)
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let d = BigInt::from(self.base);
        while self.exponent > 0 {
            let (q, r) = self.numerator.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.exponent -= 1;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn same_base(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.base != other.base {
            return Err(Error::Mismatch { context });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_base(other, "LocalizedInt::add")?;
        let d = BigInt::from(self.base);
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator * d.pow(e - self.exponent);
        let b = &other.numerator * d.pow(e - other.exponent);
        Self::new(a + b, e, self.base)
    }

    pub fn neg(&self) -> Self {
        Self { numerator: -self.numerator.clone(), exponent: self.exponent, base: self.base }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_base(other, "LocalizedInt::mul")?;
        Self::new(
            &self.numerator * &other.numerator,
            self.exponent + other.exponent,
            self.base,
        )
    }

    pub fn scalar_mul(&self, n: i64) -> Self {
        let mut out = Self {
            numerator: &self.numerator * BigInt::from(n),
            exponent: self.exponent,
            base: self.base,
        };
        out.canonicalize();
        out
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        n / (self.base as f64).powi(self.exponent as i32)
    }
}

impl core::fmt::Display for LocalizedInt {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}^{}", self.numerator, self.base, self.exponent)
        }
    }
}

/// K_0 class of an idempotent at a declared level: the value in `Z[1/d]`
/// is invariant under the level-raise embedding `e -> e (x) 1_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct K0Class {
    pub value: LocalizedInt,
    /// (matrix-slot count, UHF depth) provenance of the computation.
    pub level: (u32, u32),
}

/// Finite cyclic group report; order 0 encodes "not finite cyclic"
/// (the free cokernel of the zero map).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicResult {
    pub order: u64,
    pub generator_image: String,
}

/// Rank of an idempotent matrix: the rounded real trace, cross-checked
/// against the count of significant singular values.
pub fn idempotent_rank(e: &OperatorMatrix, tol: f64) -> Result<u64> {
    if !e.is_square() {
        return Err(Error::ShapeMismatch { context: "idempotent_rank" });
    }
    let defect = e.compose(e)?.sub(e)?.max_abs_entry();
    if defect >= tol {
        return Err(Error::NotIdempotent { defect });
    }
    let tr = e.trace();
    let rank = libm_round(tr.re);
    if (tr.re - rank).abs() >= tol || tr.im.abs() >= tol {
        return Err(Error::Integrity {
            detail: format!("trace {} is not near an integer", tr.re),
        });
    }
    if rank < -0.5 {
        return Err(Error::Integrity { detail: "negative idempotent trace".into() });
    }
    // numerical rank: nonzero singular values of an idempotent are >= 1,
    // so count those above 1/2 by repeated deflation of the top one
    let numerical = singular_rank(e)?;
    if numerical as f64 != rank {
        return Err(Error::Integrity {
            detail: format!("trace rank {rank} disagrees with numerical rank {numerical}"),
        });
    }
    Ok(rank as u64)
}

fn libm_round(x: f64) -> f64 {
    (x + 0.5 * x.signum()).trunc()
}

fn singular_rank(e: &OperatorMatrix) -> Result<u64> {
    let gram = e.dense().adjoint().matmul(e.dense());
    let (eig, _) = crate::linalg::hermitian_eigen(&gram)?;
    Ok(eig.iter().filter(|&&l| l > 0.25).count() as u64)
}

/// K_0 class `rank(e) / d^r` of an idempotent at level `(n, r)`.
pub fn k0_class(e: &OperatorMatrix, level: (u32, u32), d: u32, tol: f64) -> Result<K0Class> {
    let rank = idempotent_rank(e, tol)?;
    let value = LocalizedInt::new(BigInt::from(rank), level.1, d)?;
    Ok(K0Class { value, level })
}

/// Cokernel of multiplication by `m` on `Z[1/d]`: cyclic of order `|m|`
/// with every prime factor of `d` divided out to exhaustion.
pub fn pv_cokernel(m: i64, d: u32) -> Result<CyclicResult> {
    if d < 2 {
        return Err(Error::Invalid { detail: "base must be >= 2".into() });
    }
    if m == 0 {
        return Err(Error::Invalid {
            detail: "m = 0 has free cokernel Z[1/d], not a finite cyclic group".into(),
        });
    }
    let mut order = m.unsigned_abs();
    loop {
        let g = gcd_u64(order, d as u64);
        if g == 1 {
            break;
        }
        order /= g;
    }
    Ok(CyclicResult {
        order,
        generator_image: String::from("[1]"),
    })
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Kernel of multiplication by `m` on the torsion-free group `Z[1/d]`:
/// trivial unless m = 0, in which case the kernel is everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvKernel {
    Trivial,
    WholeGroup,
}

pub fn pv_kernel(m: i64, d: u32) -> Result<PvKernel> {
    if d < 2 {
        return Err(Error::Invalid { detail: "base must be >= 2".into() });
    }
    Ok(if m == 0 { PvKernel::WholeGroup } else { PvKernel::Trivial })
}

/// Assembled K-theory report for the Lp Cuntz algebra on d generators.
#[derive(Debug, Clone, PartialEq)]
pub struct OdKTheoryReport {
    pub d: u32,
    /// `K_0`: cyclic of order d - 1 (order 1 means the trivial group).
    pub k0: CyclicResult,
    /// `K_1` is trivial; recorded as the cyclic group of order 1.
    pub k1: CyclicResult,
    /// Where the class of the identity goes.
    pub unit_class: String,
}

/// `K_0 = coker(1 - d) = Z/(d-1)Z` with `[1]` landing on the standard
/// generator, and `K_1 = ker(1 - d) = 0`; both consumed from the exact
/// six-term sequence arithmetic.
pub fn od_ktheory_report(d: u32) -> Result<OdKTheoryReport> {
    let m = 1 - d as i64;
    let k0 = pv_cokernel(m, d)?;
    let k1 = match pv_kernel(m, d)? {
        PvKernel::Trivial => CyclicResult { order: 1, generator_image: String::from("0") },
        PvKernel::WholeGroup => {
            return Err(Error::Integrity { detail: "1 - d cannot be zero for d >= 2".into() })
        }
    };
    Ok(OdKTheoryReport {
        d,
        k0,
        k1,
        unit_class: format!("[1] -> [f_0] -> 1 + {}Z", d - 1),
    })
}

/// Witness that `(d-1)[1] = 0` straight from the Leavitt relations: each
/// `t_j s_j = 1` pairs the identity with the idempotent `s_j t_j`, and
/// the d orthogonal idempotents `s_j t_j` sum to the identity.
#[derive(Debug, Clone)]
pub struct UnitRelationWitness {
    pub d: u32,
    /// `t_j s_j = 1` verified for every j.
    pub pairings: bool,
    /// `(s_j t_j)(s_k t_k) = delta_{jk} s_j t_j` verified for all pairs.
    pub orthogonality: bool,
    /// `sum_j s_j t_j = 1` in normal form.
    pub partition_of_unity: bool,
    /// The certified relation exponent: `[1] = d [1]`.
    pub relation_exponent: u32,
}

impl UnitRelationWitness {
    pub fn verified(&self) -> bool {
        self.pairings && self.orthogonality && self.partition_of_unity
    }
}

pub fn mvn_unit_relation(d: u32) -> Result<UnitRelationWitness> {
    type Lq = LeavittElement<crate::exact::GaussianRational>;
    let one = Lq::one(d)?;
    let mut pairings = true;
    for j in 0..d as u8 {
        let prod = Lq::t(d, j)?.multiply(&Lq::s(d, j)?)?;
        pairings &= prod == one;
    }
    let idem: Vec<Lq> = (0..d as u8)
        .map(|j| Lq::s(d, j).unwrap().multiply(&Lq::t(d, j).unwrap()).unwrap())
        .collect();
    let mut orthogonality = true;
    for (j, ej) in idem.iter().enumerate() {
        for (k, ek) in idem.iter().enumerate() {
            let prod = ej.multiply(ek)?;
            let expect = if j == k { ej.clone() } else { Lq::zero(d)? };
            orthogonality &= prod == expect;
        }
    }
    let mut acc = Lq::zero(d)?;
    for e in &idem {
        acc = acc.add(e)?;
    }
    let partition_of_unity = acc == one;
    Ok(UnitRelationWitness {
        d,
        pairings,
        orthogonality,
        partition_of_unity,
        relation_exponent: d - 1,
    })
}

/// Brute-force oracle for [`pv_cokernel`]: enumerates `Z/|m|Z` and
/// quotients by the subgroup of classes killed by a power of d. Caller
/// keeps |m| small; this is test equipment.
pub fn pv_cokernel_oracle(m: i64, d: u32) -> Result<u64> {
    if m == 0 || d < 2 {
        return Err(Error::Invalid { detail: "oracle needs m != 0 and d >= 2".into() });
    }
    let modulus = m.unsigned_abs();
    // x is killed in the localization iff d^k x = 0 mod |m| for some k;
    // the exponent |m| is more than enough iterations.
    let mut killed = 0u64;
    for x in 0..modulus {
        let mut y = x % modulus;
        for _ in 0..modulus {
            y = (y * (d as u64 % modulus)) % modulus;
        }
        if y == 0 {
            killed += 1;
        }
    }
    if modulus % killed != 0 {
        return Err(Error::Integrity {
            detail: "killed classes do not form a subgroup".into(),
        });
    }
    Ok(modulus / killed)
}
