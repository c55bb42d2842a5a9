//! Finite free G-spaces and the constructive machinery behind the
//! simplicity and trace results: families of unimodular functions whose
//! translate-correlations vanish, the averaging operator approximating
//! the conditional expectation, and traces from invariant measures.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::crossed::{convolve, CcElement, FiniteGroup, IsometricAction};
use crate::error::{Error, Result};
use crate::space::{OperatorMatrix, WeightedSpace};
use crate::spatial::SpatialPartialIsometry;
use crate::C64;

/// Finite set with a free action of a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct GSpace {
    group: FiniteGroup,
    points: Vec<String>,
    /// `act[g * |X| + x]` is the point `g . x`.
    act: Vec<usize>,
}

impl GSpace {
    /// Checks the action axioms and freeness exhaustively.
    pub fn new(group: FiniteGroup, points: Vec<String>, act: Vec<usize>) -> Result<Self> {
        let (n, m) = (group.order(), points.len());
        if act.len() != n * m || m == 0 {
            return Err(Error::ShapeMismatch { context: "GSpace::new" });
        }
        if act.iter().any(|&x| x >= m) {
            return Err(Error::Invalid { detail: "action target out of range".into() });
        }
        let a = |g: usize, x: usize| act[g * m + x];
        let e = group.identity();
        for x in 0..m {
            if a(e, x) != x {
                return Err(Error::Invalid {
                    detail: format!("identity moves point {}", points[x]),
                });
            }
        }
        for g in 0..n {
            for h in 0..n {
                for x in 0..m {
                    if a(g, a(h, x)) != a(group.mul(g, h), x) {
                        return Err(Error::Invalid {
                            detail: format!("action axiom fails at g={g}, h={h}, x={x}"),
                        });
                    }
                }
            }
        }
        for g in 0..n {
            if g == e {
                continue;
            }
            for x in 0..m {
                if a(g, x) == x {
                    return Err(Error::NotFree {
                        detail: format!(
                            "{} fixes {}",
                            group.elements()[g],
                            points[x]
                        ),
                    });
                }
            }
        }
        Ok(Self { group, points, act })
    }

    /// The group acting on itself by left translation (always free).
    pub fn left_translation(group: FiniteGroup) -> Self {
        let n = group.order();
        let points = group.elements().to_vec();
        let mut act = Vec::with_capacity(n * n);
        for g in 0..n {
            for x in 0..n {
                act.push(group.mul(g, x));
            }
        }
        Self::new(group, points, act).expect("left translation is free")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g * self.len() + x]
    }

    /// Carrier of the induced action: the point set with uniform mass.
    pub fn carrier(&self) -> WeightedSpace {
        let m = self.len();
        WeightedSpace::new(self.points.clone(), vec![1.0 / m as f64; m])
            .expect("point labels distinct")
    }

    /// The crossed-product action on `L(L^p(X))` whose diagonal
    /// subalgebra is `C(X)` with `alpha_g(f)(x) = f(g^{-1} x)`.
    pub fn induced_action(&self) -> IsometricAction {
        let carrier = self.carrier();
        let n = self.group.order();
        let implementers = (0..n)
            .map(|g| {
                let perm: Vec<usize> = (0..self.len()).map(|x| self.act(g, x)).collect();
                let phases = vec![C64::new(1.0, 0.0); self.len()];
                SpatialPartialIsometry::from_permutation(carrier.clone(), &perm, &phases)
                    .expect("permutation implementer")
            })
            .collect();
        IsometricAction::new(self.group.clone(), carrier, implementers)
            .expect("induced action is isometric")
    }

    /// Splits the points into orbits, each listed as `orbit[h] = h . t`
    /// for the first unvisited transversal point t.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut orbits = Vec::new();
        for t in 0..self.len() {
            if seen[t] {
                continue;
            }
            let orbit: Vec<usize> = (0..self.group.order()).map(|h| self.act(h, t)).collect();
            for &x in &orbit {
                seen[x] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Diagonal multiplication operator for a function on the points.
    pub fn diagonal(&self, values: &[C64]) -> Result<OperatorMatrix> {
        if values.len() != self.len() {
            return Err(Error::ShapeMismatch { context: "GSpace::diagonal" });
        }
        let carrier = self.carrier();
        let mut out = OperatorMatrix::zero(carrier.clone(), carrier);
        for (x, &v) in values.iter().enumerate() {
            out.set_entry(x, x, v);
        }
        Ok(out)
    }
}

/// Family of unimodular functions with vanishing translate-correlations
/// on a declared set of `(g, x)` pairs.
#[derive(Debug, Clone)]
pub struct VanishingFamily {
    pub gspace: Arc<GSpace>,
    /// `functions[k][x]` is `s_k(x)`, unimodular.
    pub functions: Vec<Vec<C64>>,
    /// Pairs `(g, x)` where the correlation is guaranteed to vanish.
    pub zero_at: BTreeSet<(usize, usize)>,
}

impl VanishingFamily {
    /// `(1/n) sum_k s_k(x) conj(s_k(g^{-1} x))`.
    pub fn correlation(&self, g: usize, x: usize) -> C64 {
        let ginv = self.gspace.group().inv(g);
        let gx = self.gspace.act(ginv, x);
        let n = self.functions.len() as f64;
        let mut acc = C64::new(0.0, 0.0);
        for s in &self.functions {
            acc += s[x] * s[gx].conj();
        }
        acc / n
    }

    /// Checks unimodularity (1e-12) and the declared vanishing pairs
    /// (`tol`), returning the worst correlation modulus over `zero_at`.
    pub fn check(&self, tol: f64) -> Result<f64> {
        for s in &self.functions {
            if s.len() != self.gspace.len() {
                return Err(Error::ShapeMismatch { context: "VanishingFamily::check" });
            }
            for v in s {
                if (v.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Invalid {
                        detail: "family function is not unimodular".into(),
                    });
                }
            }
        }
        let mut worst = 0.0f64;
        for &(g, x) in &self.zero_at {
            let c = self.correlation(g, x).norm();
            worst = worst.max(c);
            if c > tol {
                return Err(Error::Integrity {
                    detail: format!("correlation at (g={g}, x={x}) is {c:e} > {tol:e}"),
                });
            }
        }
        Ok(worst)
    }
}

/// Root-of-unity synthesis: n = |G| functions built from a fixed group
/// labeling and an orbit transversal; the correlations vanish for every
/// g != 1 at every point, which is stronger than any requested F.
pub fn synth_vanishing_family(gspace: &Arc<GSpace>, forbidden: &[usize]) -> Result<VanishingFamily> {
    let group = gspace.group();
    let e = group.identity();
    if forbidden.contains(&e) {
        return Err(Error::Invalid {
            detail: "forbidden set must exclude the identity".into(),
        });
    }
    let n = group.order();
    // For each point record which group element carries its transversal
    // point to it; freeness makes the label unique on each orbit.
    let mut label = vec![0usize; gspace.len()];
    for orbit in gspace.orbits() {
        for (h, &x) in orbit.iter().enumerate() {
            label[x] = h;
        }
    }
    let functions: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            (0..gspace.len())
                .map(|x| {
                    let t = 2.0 * core::f64::consts::PI * (k * label[x] % n) as f64 / n as f64;
                    C64::new(t.cos(), t.sin())
                })
                .collect()
        })
        .collect();
    let mut zero_at = BTreeSet::new();
    for g in 0..n {
        if g == e {
            continue;
        }
        for x in 0..gspace.len() {
            zero_at.insert((g, x));
        }
    }
    let fam = VanishingFamily { gspace: gspace.clone(), functions, zero_at };
    fam.check(1e-10)?;
    Ok(fam)
}

/// The two-function family from the one-point removal argument: s_1 = 1
/// and s_2 takes the value -1 exactly on `g^{-1} x`, so the correlation
/// vanishes at `(g, x)` only.
pub fn pair_family(gspace: &Arc<GSpace>, g: usize, x: usize) -> Result<VanishingFamily> {
    let group = gspace.group();
    if g == group.identity() {
        return Err(Error::Invalid { detail: "pair family needs g != 1".into() });
    }
    if x >= gspace.len() {
        return Err(Error::Invalid { detail: "point index out of range".into() });
    }
    let gx = gspace.act(group.inv(g), x);
    let s1 = vec![C64::new(1.0, 0.0); gspace.len()];
    let mut s2 = vec![C64::new(1.0, 0.0); gspace.len()];
    s2[gx] = C64::new(-1.0, 0.0);
    let mut zero_at = BTreeSet::new();
    zero_at.insert((g, x));
    let fam = VanishingFamily { gspace: gspace.clone(), functions: vec![s1, s2], zero_at };
    fam.check(1e-12)?;
    Ok(fam)
}

/// Product family `r_j s_k`: the correlation factorizes, so it vanishes
/// wherever either factor's correlation does.
pub fn combine_product(a: &VanishingFamily, b: &VanishingFamily) -> Result<VanishingFamily> {
    if a.gspace != b.gspace {
        return Err(Error::Mismatch { context: "combine_product" });
    }
    let mut functions = Vec::with_capacity(a.functions.len() * b.functions.len());
    for r in &a.functions {
        for s in &b.functions {
            functions.push(r.iter().zip(s).map(|(x, y)| x * y).collect());
        }
    }
    let zero_at = a.zero_at.union(&b.zero_at).copied().collect();
    Ok(VanishingFamily { gspace: a.gspace.clone(), functions, zero_at })
}

/// `P(a) = (1/n) sum_k s_k a conj(s_k)` with the family functions acting
/// as diagonal coefficients at the identity.
///
/// On elements supported where the family vanishes (plus the identity),
/// P agrees with the standard conditional expectation.
pub fn averaging_operator(fam: &VanishingFamily, a: &CcElement) -> Result<CcElement> {
    let induced = fam.gspace.induced_action();
    if *a.action().as_ref() != induced {
        return Err(Error::Mismatch { context: "averaging_operator action" });
    }
    let action = a.action().clone();
    let e = action.group().identity();
    let mut acc = CcElement::zero(action.clone());
    for s in &fam.functions {
        let left = CcElement::monomial(action.clone(), e, fam.gspace.diagonal(s)?)?;
        let conj: Vec<C64> = s.iter().map(|z| z.conj()).collect();
        let right = CcElement::monomial(action.clone(), e, fam.gspace.diagonal(&conj)?)?;
        acc = acc.add(&convolve(&convolve(&left, a)?, &right)?)?;
    }
    Ok(acc.scale(C64::new(1.0 / fam.functions.len() as f64, 0.0)))
}

/// G-invariant probability measure on the points of a free G-space.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMeasure {
    pub gspace: Arc<GSpace>,
    pub prob: Vec<f64>,
}

impl InvariantMeasure {
    pub fn uniform(gspace: Arc<GSpace>) -> Self {
        let m = gspace.len();
        Self { gspace, prob: vec![1.0 / m as f64; m] }
    }

    pub fn new(gspace: Arc<GSpace>, prob: Vec<f64>) -> Result<Self> {
        if !check_invariance(&gspace, &prob)? {
            return Err(Error::Invalid { detail: "measure is not G-invariant".into() });
        }
        Ok(Self { gspace, prob })
    }
}

/// True iff `prob` is a G-invariant probability vector.
pub fn check_invariance(gspace: &GSpace, prob: &[f64]) -> Result<bool> {
    if prob.len() != gspace.len() {
        return Err(Error::ShapeMismatch { context: "check_invariance" });
    }
    if prob.iter().any(|&x| x < 0.0) {
        return Err(Error::NotPositive { what: "probability mass" });
    }
    let total: f64 = prob.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid { detail: "masses do not sum to 1".into() });
    }
    for g in 0..gspace.group().order() {
        for x in 0..gspace.len() {
            if (prob[gspace.act(g, x)] - prob[x]).abs() > 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orbit-averaging any probability vector produces an invariant one.
pub fn orbit_average(gspace: &GSpace, prob: &[f64]) -> Result<Vec<f64>> {
    if prob.len() != gspace.len() {
        return Err(Error::ShapeMismatch { context: "orbit_average" });
    }
    let n = gspace.group().order() as f64;
    let mut out = vec![0.0; gspace.len()];
    for g in 0..gspace.group().order() {
        for x in 0..gspace.len() {
            out[gspace.act(g, x)] += prob[x] / n;
        }
    }
    Ok(out)
}

/// `tau_mu(a) = sum_x mu(x) E(a)(x, x)`.
pub fn trace_from_measure(mu: &InvariantMeasure, a: &CcElement) -> Result<C64> {
    let induced = mu.gspace.induced_action();
    if *a.action().as_ref() != induced {
        return Err(Error::Mismatch { context: "trace_from_measure action" });
    }
    let e = a.action().group().identity();
    let diag = a.coefficient(e);
    let mut acc = C64::new(0.0, 0.0);
    for (x, &m) in mu.prob.iter().enumerate() {
        acc += diag.entry(x, x) * m;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed::conditional_expectation;
    use crate::rng;
    use rand::Rng;

    fn random_diag_element(
        gspace: &Arc<GSpace>,
        action: &Arc<IsometricAction>,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> CcElement {
        let mut coeffs = alloc::collections::BTreeMap::new();
        for g in 0..gspace.group().order() {
            let vals: Vec<C64> = (0..gspace.len()).map(|_| rng::gaussian_c64(rng)).collect();
            coeffs.insert(g, gspace.diagonal(&vals).unwrap());
        }
        CcElement::new(action.clone(), coeffs).unwrap()
    }

    #[test]
    fn rejects_non_free_action() {
        // Z_2 acting trivially on two points has fixed points.
        let group = FiniteGroup::cyclic(2);
        let act = alloc::vec![0, 1, 0, 1];
        assert!(matches!(
            GSpace::new(group, alloc::vec!["a".into(), "b".into()], act),
            Err(Error::NotFree { .. })
        ));
    }

    #[test]
    fn synth_family_on_cyclic_groups() {
        for n in 2..=6 {
            let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(n)));
            let fam = synth_vanishing_family(&gspace, &[1]).unwrap();
            assert_eq!(fam.functions.len(), n);
            // vanishing holds for all g != 1 exhaustively
            assert_eq!(fam.zero_at.len(), (n - 1) * n);
            let worst = fam.check(1e-10).unwrap();
            assert!(worst < 1e-12, "worst correlation {worst:e}");
        }
    }

    #[test]
    fn synth_family_on_klein_group_and_s3() {
        let klein = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        for group in [klein, FiniteGroup::symmetric_3()] {
            let gspace = Arc::new(GSpace::left_translation(group));
            let fam = synth_vanishing_family(&gspace, &[1, 2]).unwrap();
            assert!(fam.check(1e-10).unwrap() < 1e-12);
        }
    }

    #[test]
    fn trivial_group_family_is_constant_one() {
        let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(1)));
        let fam = synth_vanishing_family(&gspace, &[]).unwrap();
        assert_eq!(fam.functions.len(), 1);
        assert!((fam.functions[0][0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(fam.zero_at.is_empty());
    }

    #[test]
    fn pair_family_and_products() {
        let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(2)));
        // g the flip, x = 0: s2 = (1, -1), correlation (1 + (-1))/2 = 0.
        let fam = pair_family(&gspace, 1, 0).unwrap();
        assert!((fam.functions[1][0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((fam.functions[1][1] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(fam.correlation(1, 0).norm() < 1e-15);

        // products vanish on the union of the vanishing loci
        let g4 = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(4)));
        let f1 = pair_family(&g4, 1, 0).unwrap();
        let f2 = pair_family(&g4, 1, 2).unwrap();
        let prod = combine_product(&f1, &f2).unwrap();
        assert_eq!(prod.functions.len(), 4);
        assert!(prod.zero_at.contains(&(1, 0)) && prod.zero_at.contains(&(1, 2)));
        assert!(prod.check(1e-12).is_ok());

        // across distinct group elements
        let f3 = pair_family(&g4, 2, 0).unwrap();
        let prod2 = combine_product(&f1, &f3).unwrap();
        assert!(prod2.zero_at.contains(&(1, 0)) && prod2.zero_at.contains(&(2, 0)));
        assert!(prod2.check(1e-12).is_ok());
    }

    #[test]
    fn averaging_fixes_diagonals_and_kills_off_identity_terms() {
        let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(3)));
        let action = Arc::new(gspace.induced_action());
        let fam = synth_vanishing_family(&gspace, &[1, 2]).unwrap();
        let mut r = rng::stream(61);

        // P(f u_1) = f u_1 for diagonal f
        let vals: Vec<C64> = (0..3).map(|_| rng::gaussian_c64(&mut r)).collect();
        let f = CcElement::monomial(
            action.clone(),
            action.group().identity(),
            gspace.diagonal(&vals).unwrap(),
        )
        .unwrap();
        let pf = averaging_operator(&fam, &f).unwrap();
        assert!(pf.sub(&f).unwrap().max_abs_entry() < 1e-12);

        // P(f u_g) = 0 entrywise for g != 1
        for g in 1..3 {
            let off = CcElement::monomial(action.clone(), g, gspace.diagonal(&vals).unwrap())
                .unwrap();
            let poff = averaging_operator(&fam, &off).unwrap();
            assert!(poff.max_abs_entry() < 1e-12, "g={g}: {}", poff.max_abs_entry());
        }

        // P(a) = E(a) u_1 for full-support diagonal-coefficient elements
        let a = random_diag_element(&gspace, &action, &mut r);
        let pa = averaging_operator(&fam, &a).unwrap();
        let ea = CcElement::monomial(
            action.clone(),
            action.group().identity(),
            conditional_expectation(&a),
        )
        .unwrap();
        assert!(pa.sub(&ea).unwrap().max_abs_entry() < 1e-10);
    }

    #[test]
    fn trace_identities() {
        let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(3)));
        let action = Arc::new(gspace.induced_action());
        let mu = InvariantMeasure::uniform(gspace.clone());

        // tau(1) = 1
        let one = CcElement::unitary(action.clone(), action.group().identity()).unwrap();
        let t = trace_from_measure(&mu, &one).unwrap();
        assert!((t - C64::new(1.0, 0.0)).norm() < 1e-14);

        // off-identity monomials vanish
        let mut r = rng::stream(62);
        let vals: Vec<C64> = (0..3).map(|_| rng::gaussian_c64(&mut r)).collect();
        let off = CcElement::monomial(action.clone(), 1, gspace.diagonal(&vals).unwrap()).unwrap();
        assert!(trace_from_measure(&mu, &off).unwrap().norm() < 1e-15);

        // trace property on random pairs
        for _ in 0..25 {
            let a = random_diag_element(&gspace, &action, &mut r);
            let b = random_diag_element(&gspace, &action, &mut r);
            let ab = trace_from_measure(&mu, &convolve(&a, &b).unwrap()).unwrap();
            let ba = trace_from_measure(&mu, &convolve(&b, &a).unwrap()).unwrap();
            assert!((ab - ba).norm() < 1e-10, "{ab} vs {ba}");
        }
    }

    #[test]
    fn invariance_checks() {
        let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(4)));
        let uniform = alloc::vec![0.25; 4];
        assert!(check_invariance(&gspace, &uniform).unwrap());

        // point mass moves under a free action
        let point = alloc::vec![1.0, 0.0, 0.0, 0.0];
        assert!(!check_invariance(&gspace, &point).unwrap());

        // orbit averaging repairs it
        let mut r = rng::stream(63);
        let raw: Vec<f64> = (0..4).map(|_| r.gen::<f64>() + 0.01).collect();
        let total: f64 = raw.iter().sum();
        let prob: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let avg = orbit_average(&gspace, &prob).unwrap();
        assert!(check_invariance(&gspace, &avg).unwrap());

        // negative mass rejected
        assert!(check_invariance(&gspace, &[1.5, -0.5, 0.0, 0.0]).is_err());
    }
}
