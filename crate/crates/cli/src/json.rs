//! JSON schemas for every value that crosses the CLI boundary.
//!
//! Complex numbers are `[re, im]`; matrices are row-major by codomain
//! atom; group tables are nested rows. Serialization is deterministic,
//! so identical run configurations produce byte-identical output.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};

use lplab_core::crossed::{CcElement, FiniteGroup, IsometricAction, ZAction, ZElement};
use lplab_core::exact::{gq, GaussianRational};
use lplab_core::freeaction::GSpace;
use lplab_core::leavitt::{LeavittElement, Word};
use lplab_core::opnorm::NormEstimate;
use lplab_core::space::{LpVector, OperatorMatrix, WeightedSpace};
use lplab_core::spatial::SpatialPartialIsometry;
use lplab_core::stabilized::{BElement, BWord, CrossedElement};
use lplab_core::C64;

pub type Complex = [f64; 2];

pub fn c64(z: C64) -> Complex {
    [z.re, z.im]
}

pub fn to_c64(z: Complex) -> C64 {
    C64::new(z[0], z[1])
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceDto {
    pub atoms: Vec<String>,
    pub weights: Vec<f64>,
}

impl SpaceDto {
    pub fn into_core(self) -> anyhow::Result<WeightedSpace> {
        WeightedSpace::new(self.atoms, self.weights).map_err(|e| anyhow!("space: {e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDto {
    pub domain: SpaceDto,
    pub codomain: SpaceDto,
    /// Row-major by codomain atom.
    pub entries: Vec<Vec<Complex>>,
}

impl MatrixDto {
    pub fn into_core(self) -> anyhow::Result<OperatorMatrix> {
        let domain = self.domain.into_core()?;
        let codomain = self.codomain.into_core()?;
        if self.entries.len() != codomain.dim() {
            bail!("entries: expected {} rows, got {}", codomain.dim(), self.entries.len());
        }
        let mut out = OperatorMatrix::zero(domain, codomain);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != out.domain.dim() {
                bail!("entries row {i}: expected {} columns, got {}", out.domain.dim(), row.len());
            }
            for (j, &z) in row.iter().enumerate() {
                out.set_entry(i, j, to_c64(z));
            }
        }
        Ok(out)
    }
}

/// Bare coefficient matrix over a known space.
pub fn entries_to_matrix(
    entries: &[Vec<Complex>],
    space: &WeightedSpace,
    what: &str,
) -> anyhow::Result<OperatorMatrix> {
    if entries.len() != space.dim() {
        bail!("{what}: expected {} rows, got {}", space.dim(), entries.len());
    }
    let mut out = OperatorMatrix::zero(space.clone(), space.clone());
    for (i, row) in entries.iter().enumerate() {
        if row.len() != space.dim() {
            bail!("{what} row {i}: expected {} columns, got {}", space.dim(), row.len());
        }
        for (j, &z) in row.iter().enumerate() {
            out.set_entry(i, j, to_c64(z));
        }
    }
    Ok(out)
}

pub fn matrix_entries(m: &OperatorMatrix) -> Vec<Vec<Complex>> {
    (0..m.codomain.dim())
        .map(|i| (0..m.domain.dim()).map(|j| c64(m.entry(i, j))).collect())
        .collect()
}

pub fn vector_coords(v: &LpVector) -> Vec<Complex> {
    v.coords.iter().map(|&z| c64(z)).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpatialPairDto {
    pub from: String,
    pub to: String,
    pub phase: Complex,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpatialDto {
    pub domain: SpaceDto,
    pub codomain: SpaceDto,
    pub pairs: Vec<SpatialPairDto>,
}

impl SpatialDto {
    pub fn into_core(self) -> anyhow::Result<SpatialPartialIsometry> {
        let domain = self.domain.into_core()?;
        let codomain = self.codomain.into_core()?;
        let mut map = BTreeMap::new();
        for pair in &self.pairs {
            let x = domain
                .atom_index(&pair.from)
                .ok_or_else(|| anyhow!("pairs: unknown domain atom {:?}", pair.from))?;
            let y = codomain
                .atom_index(&pair.to)
                .ok_or_else(|| anyhow!("pairs: unknown codomain atom {:?}", pair.to))?;
            map.insert(x, (y, to_c64(pair.phase)));
        }
        SpatialPartialIsometry::new(domain, codomain, map).map_err(|e| anyhow!("pairs: {e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupDto {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupDto {
    pub fn into_core(self) -> anyhow::Result<FiniteGroup> {
        let n = self.elements.len();
        let mut flat = Vec::with_capacity(n * n);
        if self.table.len() != n {
            bail!("table: expected {n} rows, got {}", self.table.len());
        }
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != n {
                bail!("table row {i}: expected {n} entries, got {}", row.len());
            }
            flat.extend_from_slice(row);
        }
        FiniteGroup::from_table(self.elements, flat).map_err(|e| anyhow!("group: {e}"))
    }
}

/// Built-in group names accepted wherever a group is expected.
pub fn builtin_group(name: &str) -> anyhow::Result<FiniteGroup> {
    if let Some(rest) = name.strip_prefix('Z') {
        if let Some((a, b)) = rest.split_once("xZ") {
            let (a, b): (usize, usize) = (a.parse()?, b.parse()?);
            return Ok(FiniteGroup::direct_product(
                &FiniteGroup::cyclic(a),
                &FiniteGroup::cyclic(b),
            ));
        }
        let n: usize = rest.parse().context("cyclic group order")?;
        if n == 0 {
            bail!("cyclic group order must be positive");
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    if name == "S3" {
        return Ok(FiniteGroup::symmetric_3());
    }
    bail!("unknown group {name:?}; use Z<n>, Z<a>xZ<b>, S3, or a JSON file")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ActionDto {
    pub group: GroupDto,
    /// One spatial isometry per group element, keyed by element label.
    pub implementers: BTreeMap<String, SpatialDto>,
}

impl ActionDto {
    pub fn into_core(self) -> anyhow::Result<IsometricAction> {
        let group = self.group.into_core()?;
        let mut implementers = Vec::with_capacity(group.order());
        let mut carrier: Option<WeightedSpace> = None;
        for label in group.elements() {
            let dto = self
                .implementers
                .get(label)
                .ok_or_else(|| anyhow!("implementers: missing entry for element {label:?}"))?;
            let iso = SpatialDto {
                domain: SpaceDto { atoms: dto.domain.atoms.clone(), weights: dto.domain.weights.clone() },
                codomain: SpaceDto { atoms: dto.codomain.atoms.clone(), weights: dto.codomain.weights.clone() },
                pairs: dto
                    .pairs
                    .iter()
                    .map(|p| SpatialPairDto { from: p.from.clone(), to: p.to.clone(), phase: p.phase })
                    .collect(),
            }
            .into_core()?;
            if carrier.is_none() {
                carrier = Some(iso.domain_space().clone());
            }
            implementers.push(iso);
        }
        let carrier = carrier.ok_or_else(|| anyhow!("implementers: empty action"))?;
        IsometricAction::new(group, carrier, implementers).map_err(|e| anyhow!("action: {e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CcElementDto {
    pub action: ActionDto,
    /// Coefficient matrices on the carrier, keyed by group element label.
    pub coeffs: BTreeMap<String, Vec<Vec<Complex>>>,
}

impl CcElementDto {
    pub fn into_core(self) -> anyhow::Result<CcElement> {
        let coeff_entries = self.coeffs;
        let action = Arc::new(self.action.into_core()?);
        let mut coeffs = BTreeMap::new();
        for (label, entries) in &coeff_entries {
            let g = action
                .group()
                .element_index(label)
                .ok_or_else(|| anyhow!("coeffs: unknown group element {label:?}"))?;
            coeffs.insert(
                g,
                entries_to_matrix(entries, action.carrier(), &format!("coeffs[{label}]"))?,
            );
        }
        CcElement::new(action, coeffs).map_err(|e| anyhow!("element: {e}"))
    }
}

pub fn cc_coeffs_json(a: &CcElement) -> BTreeMap<String, Vec<Vec<Complex>>> {
    let group = a.action().group();
    let mut out = BTreeMap::new();
    for g in 0..group.order() {
        let m = a.coefficient(g);
        if m.max_abs_entry() > 0.0 {
            out.insert(group.elements()[g].clone(), matrix_entries(&m));
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ZElementDto {
    pub carrier: SpaceDto,
    /// Optional implementer of the Z action; identity when omitted.
    #[serde(default)]
    pub implementer: Option<SpatialDto>,
    /// Coefficient matrices keyed by the integer position as a string.
    pub coeffs: BTreeMap<String, Vec<Vec<Complex>>>,
}

impl ZElementDto {
    pub fn into_core(self) -> anyhow::Result<ZElement> {
        let carrier = self.carrier.into_core()?;
        let action = match self.implementer {
            Some(dto) => ZAction::new(carrier.clone(), dto.into_core()?)
                .map_err(|e| anyhow!("implementer: {e}"))?,
            None => ZAction::trivial(carrier.clone()),
        };
        let mut coeffs = BTreeMap::new();
        for (key, entries) in &self.coeffs {
            let n: i64 = key.parse().with_context(|| format!("coeffs key {key:?}"))?;
            coeffs.insert(n, entries_to_matrix(entries, &carrier, &format!("coeffs[{key}]"))?);
        }
        ZElement::new(Arc::new(action), coeffs).map_err(|e| anyhow!("element: {e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LeavittTermDto {
    pub mu: Vec<u8>,
    pub nu: Vec<u8>,
    pub c: Complex,
}

pub fn leavitt_from_terms(d: u32, terms: &[LeavittTermDto]) -> anyhow::Result<LeavittElement<C64>> {
    let mut out = LeavittElement::zero(d).map_err(|e| anyhow!("element: {e}"))?;
    for (i, t) in terms.iter().enumerate() {
        let mono = LeavittElement::monomial(
            d,
            Word(t.mu.clone()),
            Word(t.nu.clone()),
            to_c64(t.c),
        )
        .map_err(|e| anyhow!("element term {i}: {e}"))?;
        out = out.add(&mono).map_err(|e| anyhow!("element term {i}: {e}"))?;
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BWordDto {
    pub head: [u64; 2],
    #[serde(default)]
    pub tail: Vec<[u8; 2]>,
    /// Exact Gaussian-integer coefficient.
    pub re: i64,
    #[serde(default)]
    pub im: i64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StabElementDto {
    pub d: u32,
    /// BElement term lists keyed by the integer crossed position.
    pub coeffs: BTreeMap<String, Vec<BWordDto>>,
}

impl StabElementDto {
    pub fn into_core(self) -> anyhow::Result<CrossedElement> {
        let mut out =
            CrossedElement::zero(self.d).map_err(|e| anyhow!("element: {e}"))?;
        for (key, words) in &self.coeffs {
            let n: i64 = key.parse().with_context(|| format!("coeffs key {key:?}"))?;
            let terms: Vec<(BWord, GaussianRational)> = words
                .iter()
                .map(|w| {
                    (
                        BWord {
                            head: (w.head[0], w.head[1]),
                            tail: w.tail.iter().map(|&[l, m]| (l, m)).collect(),
                        },
                        gq(w.re, w.im),
                    )
                })
                .collect();
            let b = BElement::from_terms(self.d, terms)
                .map_err(|e| anyhow!("coeffs[{key}]: {e}"))?;
            out = out
                .add(&lplab_core::stabilized::CrossedElement::monomial(n, b))
                .map_err(|e| anyhow!("coeffs[{key}]: {e}"))?;
        }
        Ok(out)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GSpaceDto {
    pub points: Vec<String>,
    /// `act[g][x]` is the index of `g . x`, rows ordered like the group
    /// elements.
    pub act: Vec<Vec<usize>>,
}

pub fn gspace_from_dto(group: FiniteGroup, dto: GSpaceDto) -> anyhow::Result<GSpace> {
    let m = dto.points.len();
    if dto.act.len() != group.order() {
        bail!("act: expected {} rows, got {}", group.order(), dto.act.len());
    }
    let mut flat = Vec::with_capacity(group.order() * m);
    for (g, row) in dto.act.iter().enumerate() {
        if row.len() != m {
            bail!("act row {g}: expected {m} entries, got {}", row.len());
        }
        flat.extend_from_slice(row);
    }
    GSpace::new(group, dto.points, flat).map_err(|e| anyhow!("space: {e}"))
}

#[derive(Debug, Serialize)]
pub struct NormEstimateDto {
    pub value: f64,
    pub witness: Vec<Complex>,
    pub certified_lower_bound: bool,
    pub converged: bool,
    pub iterations: usize,
}

impl NormEstimateDto {
    pub fn from_core(e: &NormEstimate) -> Self {
        Self {
            value: e.value,
            witness: vector_coords(&e.witness),
            certified_lower_bound: e.certified_lower_bound,
            converged: e.converged,
            iterations: e.iterations,
        }
    }
}
