//! Invariant packages for the closed orientable manifolds this crate models:
//! highly connected manifolds of dimension `2n+2` for `n = 2, 3, 4`, carrying
//! free and torsion homology ranks `(l, k, T)`, a spin flag, the rank `c` of
//! the degree-2 Steenrod square, an attaching-coefficient vector for the top
//! cell of the suspension, and optional cohomology-operation matrices.
//!
//! The homology of such a manifold is pinned by Poincaré duality:
//!
//! ```text
//! H_0 = Z,  H_n = Z^l ⊕ T,  H_{n+1} = Z^k ⊕ T,  H_{n+2} = Z^l,  H_{2n+2} = Z,
//! ```
//!
//! with every other group zero and `T` a finite group of odd order. All
//! cohomology, with any coefficients, follows by universal coefficients; the
//! tables here expose both so downstream engines never re-derive them.
//!
//! Validation is total: [`ManifoldDescriptor::validate`] reports *every*
//! broken invariant with a field path rather than stopping at the first, so
//! a hand-written descriptor file can be repaired in one round.
//!
//! Cohomology operations (`Sq²`, `P¹` and the reductions `ρ₂`, `ρ₃`) cannot
//! be recovered from the ranks alone, so they are optional inputs. The
//! integral operations the engines consume are the composites
//! `Sq²_Z = Sq² ∘ ρ₂` and `P¹_Z = P¹ ∘ ρ₃`, assembled by
//! [`ManifoldDescriptor::compose_steenrod`]. A secondary operation appears
//! in exactly one lifting criterion; it is never computed, only consulted
//! through the caller-supplied [`ThetaOracle`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{AbelianError, FgAbGroup};
use crate::hom::GroupHom;
use crate::matrix::IntMatrix;
use crate::splitting::AttachingVector;

/// Errors from descriptor ingestion and the operations derived from one.
#[derive(Debug, Error)]
pub enum ManifoldError {
    #[error("descriptor failed validation:\n{}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("descriptor file did not parse: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Group(#[from] AbelianError),
    #[error("operation needs missing input: {0}")]
    MissingData(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// One broken invariant, addressed by the field that carries it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// The torsion subgroup `T` of the middle homology, kept as an explicit list
/// of prime-power cyclic factors `(p, r)` in canonical sorted order. The
/// theory requires `T` to be 2-torsion-free, which validation enforces; the
/// 3-primary factors play a special role (they carry Moore-space wedge
/// summands), so they have a dedicated accessor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionGroup {
    factors: Vec<(u64, u32)>,
}

impl TorsionGroup {
    pub fn trivial() -> Self {
        TorsionGroup {
            factors: Vec::new(),
        }
    }

    /// Sorts the factors and drops trivial ones; primality is checked later
    /// by `validate`, not here, so malformed input can still be reported
    /// with a field path.
    pub fn new(mut factors: Vec<(u64, u32)>) -> Self {
        factors.retain(|&(_, r)| r > 0);
        factors.sort_unstable();
        TorsionGroup { factors }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn as_group(&self) -> FgAbGroup {
        FgAbGroup::from_prime_powers(0, self.factors.clone())
    }

    /// Exponents `r` of the `Z/3^r` factors, in canonical order.
    pub fn three_exponents(&self) -> Vec<u32> {
        self.factors
            .iter()
            .filter(|&&(p, _)| p == 3)
            .map(|&(_, r)| r)
            .collect()
    }

    /// `T` with the single factor `Z/3^r` at position `index` (among the
    /// 3-primary factors) removed — the quotient appearing in the wedge
    /// decomposition when an attaching coefficient absorbs that factor.
    pub fn without_three_factor(&self, index: usize) -> TorsionGroup {
        let mut seen = 0usize;
        let factors = self
            .factors
            .iter()
            .filter(|&&(p, _)| {
                if p == 3 {
                    seen += 1;
                    seen - 1 != index
                } else {
                    true
                }
            })
            .copied()
            .collect();
        TorsionGroup { factors }
    }
}

/// A matrix over `Z/modulus` attached to a cohomology degree, as ingested
/// from a descriptor file. Entries are row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMatrix {
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u64>,
}

impl DegreeMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn to_int_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .entries
            .chunks(self.cols.max(1))
            .map(|row| row.iter().map(|&e| e as i64).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        if self.rows == 0 || self.cols == 0 {
            IntMatrix::zeros(self.rows, self.cols)
        } else {
            IntMatrix::from_i64(&refs)
        }
    }
}

/// One component of the cup-square form on `H²` (dimension six only): the
/// symmetric matrix `Q` of the `H⁴`-generator component `u ↦ uᵀ Q u`,
/// together with that generator's order (`0` for a free generator).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupForm {
    pub order: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl CupForm {
    /// Evaluate `uᵀ Q u` reduced by the generator order.
    pub fn evaluate(&self, u: &[i64]) -> i64 {
        let mut total: i64 = 0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                total += self.entries[i * self.cols + j] * u[i] * u[j];
            }
        }
        if self.order == 0 {
            total
        } else {
            total.rem_euclid(self.order as i64)
        }
    }
}

/// Optional cohomology-operation matrices, keyed by source degree. The mod 2
/// square `sq2` and reduction `rho2` live over `Z/2`; the mod 3 power `p1`
/// and reduction `rho3` over `Z/3`. `cup` holds the quadratic form of the
/// cup square `H² → H⁴` (dimension six only), one [`CupForm`] per `H⁴`
/// generator in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteenrodData {
    #[serde(default)]
    pub sq2: Vec<DegreeMatrix>,
    #[serde(default)]
    pub rho2: Vec<DegreeMatrix>,
    #[serde(default)]
    pub p1: Vec<DegreeMatrix>,
    #[serde(default)]
    pub rho3: Vec<DegreeMatrix>,
    #[serde(default)]
    pub cup: Vec<CupForm>,
}

impl SteenrodData {
    /// Parse a standalone operation file.
    pub fn from_toml_str(text: &str) -> Result<SteenrodData, ManifoldError> {
        Ok(toml::from_str(text)?)
    }

    pub fn is_empty(&self) -> bool {
        self.sq2.is_empty()
            && self.rho2.is_empty()
            && self.p1.is_empty()
            && self.rho3.is_empty()
            && self.cup.is_empty()
    }

    fn at(list: &[DegreeMatrix], degree: u32) -> Option<&DegreeMatrix> {
        list.iter().find(|m| m.degree == degree)
    }

    pub fn sq2_at(&self, degree: u32) -> Option<&DegreeMatrix> {
        Self::at(&self.sq2, degree)
    }

    pub fn rho2_at(&self, degree: u32) -> Option<&DegreeMatrix> {
        Self::at(&self.rho2, degree)
    }

    pub fn p1_at(&self, degree: u32) -> Option<&DegreeMatrix> {
        Self::at(&self.p1, degree)
    }

    pub fn rho3_at(&self, degree: u32) -> Option<&DegreeMatrix> {
        Self::at(&self.rho3, degree)
    }

    /// Merge matrices from `other` into `self`, replacing same-degree
    /// entries (used for the side-channel operation file of the CLI).
    pub fn merge(&mut self, other: SteenrodData) {
        fn merge_list(dst: &mut Vec<DegreeMatrix>, src: Vec<DegreeMatrix>) {
            for m in src {
                dst.retain(|d| d.degree != m.degree);
                dst.push(m);
            }
            dst.sort_by_key(|m| m.degree);
        }
        merge_list(&mut self.sq2, other.sq2);
        merge_list(&mut self.rho2, other.rho2);
        merge_list(&mut self.p1, other.p1);
        merge_list(&mut self.rho3, other.rho3);
        if !other.cup.is_empty() {
            self.cup = other.cup;
        }
    }
}

/// Caller-supplied decision procedure for the secondary operation appearing
/// in the degree-2 lifting criterion on spin manifolds. `None` means the
/// oracle cannot decide for this class.
pub trait ThetaOracle {
    fn theta_vanishes(&self, u: &[i64]) -> Option<bool>;
}

/// Coefficients for a cohomology computation: integral or mod `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integral,
    Mod(u64),
}

impl Coefficients {
    fn as_q(self) -> u64 {
        match self {
            Coefficients::Integral => 0,
            Coefficients::Mod(m) => m,
        }
    }
}

/// The full invariant package of one manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    /// Connectivity parameter: the manifold is `(n−1)`-connected of
    /// dimension `2n+2`, with `n` one of 2, 3, 4.
    pub n: u32,
    /// Free rank of `H_n` (and of `H_{n+2}`, by duality).
    pub l: u32,
    /// Free rank of `H_{n+1}`.
    pub k: u32,
    /// Torsion of the two middle homology groups.
    pub torsion: TorsionGroup,
    /// Spin flag; `ε = 1 − spin` in the formulas.
    pub spin: bool,
    /// Rank of the degree-2 Steenrod square on `H^n(M; Z/2)`, `0 ≤ c ≤ l`.
    pub c: u32,
    /// Attaching coefficients for the top cell of the suspension.
    pub attach: AttachingVector,
    /// Optional operation matrices.
    pub steenrod: Option<SteenrodData>,
}

/// The composite integral operations, ready for kernel computations.
#[derive(Clone, Debug)]
pub struct ComposedOps {
    /// `Sq²_Z` per source degree: `H^m(M; Z) → H^{m+2}(M; Z/2)`.
    pub sq2_z: BTreeMap<u32, GroupHom>,
    /// `P¹_Z` per source degree: `H^m(M; Z) → H^{m+4}(M; Z/3)`.
    pub p1_z: BTreeMap<u32, GroupHom>,
}

impl ManifoldDescriptor {
    /// `ε`: zero for spin manifolds, one otherwise.
    pub fn epsilon(&self) -> u32 {
        if self.spin {
            0
        } else {
            1
        }
    }

    /// Number of 3-primary torsion factors (the length of the Moore-space
    /// coefficient blocks).
    pub fn t3(&self) -> usize {
        self.torsion.three_exponents().len()
    }

    /// Ambient dimension `2n + 2`.
    pub fn dim(&self) -> u32 {
        2 * self.n + 2
    }

    /// Check every descriptor invariant, returning all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(2..=4).contains(&self.n) {
            out.push(Violation::new("n", "must be 2, 3, or 4"));
            // Everything below depends on a sensible n.
            return out;
        }
        if self.c > self.l {
            out.push(Violation::new(
                "c",
                format!("c = {} exceeds l = {}", self.c, self.l),
            ));
        }
        if self.n == 2 && self.k % 2 != 0 {
            out.push(Violation::new("k", "must be even when n = 2"));
        }
        self.validate_torsion(&mut out);
        self.validate_attach(&mut out);
        if let Some(steenrod) = &self.steenrod {
            self.validate_steenrod(steenrod, &mut out);
        }
        out
    }

    fn validate_torsion(&self, out: &mut Vec<Violation>) {
        for (i, &(p, r)) in self.torsion.factors().iter().enumerate() {
            let field = format!("torsion[{i}]");
            if p % 2 == 0 {
                out.push(Violation::new(
                    field.clone(),
                    "T must be 2-torsion-free (no even prime factors)",
                ));
                continue;
            }
            match FgAbGroup::cyclic(p) {
                Ok(g) if g.torsion() == [(p, 1)] => {}
                Ok(_) => out.push(Violation::new(field.clone(), format!("{p} is not prime"))),
                Err(_) => out.push(Violation::new(
                    field.clone(),
                    format!("cannot certify {p} as prime"),
                )),
            }
            if r == 0 {
                out.push(Violation::new(field.clone(), "exponent must be positive"));
            }
            if p.checked_pow(r).is_none() {
                out.push(Violation::new(field, format!("{p}^{r} overflows")));
            }
        }
    }

    fn validate_attach(&self, out: &mut Vec<Violation>) {
        let schema = crate::splitting::block_schema(self);
        for (name, len, modulus, values) in [
            ("attach.x", schema.x.0, schema.x.1, &self.attach.x),
            ("attach.y", schema.y.0, schema.y.1, &self.attach.y),
            ("attach.z", schema.z.0, schema.z.1, &self.attach.z),
            ("attach.z2", schema.z2.0, schema.z2.1, &self.attach.z2),
            ("attach.u", schema.u.0, schema.u.1, &self.attach.u),
            ("attach.w", schema.w.0, schema.w.1, &self.attach.w),
        ] {
            if values.len() != len {
                out.push(Violation::new(
                    name,
                    format!("expected {len} entries, found {}", values.len()),
                ));
                continue;
            }
            for (i, &v) in values.iter().enumerate() {
                if modulus > 0 && v >= modulus {
                    out.push(Violation::new(
                        format!("{name}[{i}]"),
                        format!("entry {v} is not reduced mod {modulus}"),
                    ));
                }
            }
        }
        if self.n == 2 && self.attach.y.len() == self.l.saturating_sub(self.c) as usize {
            let y_zero = self.attach.y.iter().all(|&v| v == 0);
            if self.spin && !y_zero {
                out.push(Violation::new(
                    "attach.y",
                    "must vanish for a spin manifold (n = 2)",
                ));
            }
            if !self.spin && y_zero {
                out.push(Violation::new(
                    "attach.y",
                    "must be nonzero for a nonspin manifold (n = 2); \
                     in particular l − c ≥ 1 is required",
                ));
            }
        }
    }

    fn validate_steenrod(&self, s: &SteenrodData, out: &mut Vec<Violation>) {
        let rank2 = |m: u32| self.cohomology(m, Coefficients::Mod(2)).generator_count();
        let rank3 = |m: u32| self.cohomology(m, Coefficients::Mod(3)).generator_count();
        let rank_z = |m: u32| self.cohomology(m, Coefficients::Integral).generator_count();

        let mut check_family =
            |name: &str,
             list: &[DegreeMatrix],
             modulus: u64,
             shape: &dyn Fn(u32) -> (usize, usize)| {
                for m in list {
                    let field = format!("steenrod.{name}[degree {}]", m.degree);
                    let (rows, cols) = shape(m.degree);
                    if m.rows != rows || m.cols != cols {
                        out.push(Violation::new(
                            field.clone(),
                            format!(
                                "shape {}x{} does not match cohomology ranks ({rows}x{cols})",
                                m.rows, m.cols
                            ),
                        ));
                    }
                    if m.entries.len() != m.rows * m.cols {
                        out.push(Violation::new(
                            field.clone(),
                            format!(
                                "{} entries do not fill a {}x{} matrix",
                                m.entries.len(),
                                m.rows,
                                m.cols
                            ),
                        ));
                    }
                    if m.entries.iter().any(|&e| e >= modulus) {
                        out.push(Violation::new(
                            field,
                            format!("entries must be reduced mod {modulus}"),
                        ));
                    }
                }
            };
        check_family("sq2", &s.sq2, 2, &|m| (rank2(m + 2), rank2(m)));
        check_family("rho2", &s.rho2, 2, &|m| (rank2(m), rank_z(m)));
        check_family("p1", &s.p1, 3, &|m| (rank3(m + 4), rank3(m)));
        check_family("rho3", &s.rho3, 3, &|m| (rank3(m), rank_z(m)));

        if !s.cup.is_empty() {
            if self.n != 2 {
                out.push(Violation::new(
                    "steenrod.cup",
                    "cup-square data only applies to n = 2",
                ));
            } else {
                let h4 = self.cohomology(4, Coefficients::Integral);
                let orders: Vec<u64> = h4
                    .generator_orders()
                    .iter()
                    .map(|o| u64::try_from(o).unwrap_or(u64::MAX))
                    .collect();
                if s.cup.len() != orders.len() {
                    out.push(Violation::new(
                        "steenrod.cup",
                        format!(
                            "expected one form per H⁴ generator ({}), found {}",
                            orders.len(),
                            s.cup.len()
                        ),
                    ));
                } else {
                    for (g, (form, &order)) in s.cup.iter().zip(orders.iter()).enumerate() {
                        let field = format!("steenrod.cup[{g}]");
                        if form.order != order {
                            out.push(Violation::new(
                                field.clone(),
                                format!(
                                    "generator order {} does not match H⁴ ({order})",
                                    form.order
                                ),
                            ));
                        }
                        let rank = self.l as usize;
                        if form.rows != rank || form.cols != rank {
                            out.push(Violation::new(
                                field.clone(),
                                format!("form must be {rank}x{rank} over H²"),
                            ));
                        } else if form.entries.len() != rank * rank {
                            out.push(Violation::new(field, "entry count does not fill the form"));
                        } else {
                            for i in 0..rank {
                                for j in 0..i {
                                    if form.entries[i * rank + j] != form.entries[j * rank + i] {
                                        out.push(Violation::new(
                                            field.clone(),
                                            "cup-square form must be symmetric",
                                        ));
                                        break;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        // Cross-checks tying the numeric invariants to the operations.
        if let Some(sq_n) = s.sq2_at(self.n) {
            if (self.c == 0) != sq_n.is_zero() {
                out.push(Violation::new(
                    "c",
                    format!(
                        "c = {} inconsistent with Sq² on H^{} (c = 0 iff Sq² acts trivially)",
                        self.c, self.n
                    ),
                ));
            }
        }
        if let Some(sq_top) = s.sq2_at(2 * self.n) {
            if self.spin != sq_top.is_zero() {
                out.push(Violation::new(
                    "spin",
                    format!("spin flag inconsistent with Sq² on H^{}", 2 * self.n),
                ));
            }
        }
    }

    /// Integral homology, nonzero degrees only.
    pub fn homology_table(&self) -> BTreeMap<u32, FgAbGroup> {
        let mut table = BTreeMap::new();
        let torsion = self.torsion.as_group();
        let mut put = |degree: u32, group: FgAbGroup| {
            if !group.is_trivial() {
                table.insert(degree, group);
            }
        };
        put(0, FgAbGroup::free(1));
        put(
            self.n,
            FgAbGroup::free(self.l as usize).direct_sum(&torsion),
        );
        put(
            self.n + 1,
            FgAbGroup::free(self.k as usize).direct_sum(&torsion),
        );
        put(self.n + 2, FgAbGroup::free(self.l as usize));
        put(2 * self.n + 2, FgAbGroup::free(1));
        table
    }

    /// `H_m(M; Z)`, trivial outside the table.
    pub fn homology(&self, degree: u32) -> FgAbGroup {
        self.homology_table()
            .remove(&degree)
            .unwrap_or_else(FgAbGroup::trivial)
    }

    /// `H^m(M; G)` by universal coefficients:
    /// `Hom(H_m, G) ⊕ Ext(H_{m−1}, G)`.
    pub fn cohomology(&self, degree: u32, coefficients: Coefficients) -> FgAbGroup {
        let q = coefficients.as_q();
        let hom = self
            .homology(degree)
            .hom_into_cyclic(q)
            .expect("descriptor torsion orders stay certifiable");
        let ext = if degree == 0 {
            FgAbGroup::trivial()
        } else {
            self.homology(degree - 1)
                .ext_into_cyclic(q)
                .expect("descriptor torsion orders stay certifiable")
        };
        hom.direct_sum(&ext)
    }

    /// All cohomology degrees `0..=2n+2` with the given coefficients,
    /// nonzero entries only.
    pub fn cohomology_table(&self, coefficients: Coefficients) -> BTreeMap<u32, FgAbGroup> {
        let mut table = BTreeMap::new();
        for degree in 0..=self.dim() {
            let group = self.cohomology(degree, coefficients);
            if !group.is_trivial() {
                table.insert(degree, group);
            }
        }
        table
    }

    /// Assemble the integral operations `Sq²_Z = Sq² ∘ ρ₂` and
    /// `P¹_Z = P¹ ∘ ρ₃` for every degree where both factors were supplied.
    pub fn compose_steenrod(&self) -> Result<ComposedOps, ManifoldError> {
        let steenrod = self
            .steenrod
            .as_ref()
            .ok_or_else(|| ManifoldError::MissingData("Steenrod operation matrices".into()))?;
        let mut sq2_z = BTreeMap::new();
        for rho in &steenrod.rho2 {
            let Some(sq) = steenrod.sq2_at(rho.degree) else {
                continue;
            };
            let product = reduce_mod(&sq.to_int_matrix().mul(&rho.to_int_matrix()), 2);
            let hom = GroupHom::new(
                self.cohomology(rho.degree, Coefficients::Integral),
                self.cohomology(rho.degree + 2, Coefficients::Mod(2)),
                product,
            )?;
            sq2_z.insert(rho.degree, hom);
        }
        let mut p1_z = BTreeMap::new();
        for rho in &steenrod.rho3 {
            let Some(p1) = steenrod.p1_at(rho.degree) else {
                continue;
            };
            let product = reduce_mod(&p1.to_int_matrix().mul(&rho.to_int_matrix()), 3);
            let hom = GroupHom::new(
                self.cohomology(rho.degree, Coefficients::Integral),
                self.cohomology(rho.degree + 4, Coefficients::Mod(3)),
                product,
            )?;
            p1_z.insert(rho.degree, hom);
        }
        Ok(ComposedOps { sq2_z, p1_z })
    }

    /// Parse a descriptor from its structured-text (TOML) form. Attaching
    /// blocks that are omitted default to zero vectors of the schema length;
    /// entries are reduced mod their block order on ingestion.
    pub fn from_toml_str(text: &str) -> Result<ManifoldDescriptor, ManifoldError> {
        let raw: RawDescriptor = toml::from_str(text)?;
        let torsion = TorsionGroup::new(raw.torsion);
        let mut descriptor = ManifoldDescriptor {
            n: raw.n,
            l: raw.l,
            k: raw.k,
            torsion,
            spin: raw.spin,
            c: raw.c,
            attach: AttachingVector::default(),
            steenrod: raw.steenrod.filter(|s| !s.is_empty()),
        };
        let schema = crate::splitting::block_schema(&descriptor);
        let raw_attach = raw.attach.unwrap_or_default();
        descriptor.attach = AttachingVector {
            x: fill_block(raw_attach.x, schema.x),
            y: fill_block(raw_attach.y, schema.y),
            z: fill_block(raw_attach.z, schema.z),
            z2: fill_block(raw_attach.z2, schema.z2),
            u: fill_block(raw_attach.u, schema.u),
            w: fill_block(raw_attach.w, schema.w),
        };
        Ok(descriptor)
    }
}

/// Reduce every entry of `m` into `0..modulus`.
fn reduce_mod(m: &IntMatrix, modulus: i64) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    let modulus = BigInt::from(modulus);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let mut v = m.get(i, j) % &modulus;
            if v.sign() == num_bigint::Sign::Minus {
                v += &modulus;
            }
            out.set(i, j, v);
        }
    }
    out
}

fn fill_block(values: Option<Vec<u64>>, (len, modulus): (usize, u64)) -> Vec<u64> {
    match values {
        None => vec![0; len],
        Some(vs) => vs
            .into_iter()
            .map(|v| if modulus > 0 { v % modulus } else { v })
            .collect(),
    }
}

#[derive(Deserialize)]
struct RawDescriptor {
    n: u32,
    #[serde(default)]
    l: u32,
    #[serde(default)]
    k: u32,
    #[serde(default)]
    torsion: Vec<(u64, u32)>,
    #[serde(default)]
    spin: bool,
    #[serde(default)]
    c: u32,
    #[serde(default)]
    attach: Option<RawAttach>,
    #[serde(default)]
    steenrod: Option<SteenrodData>,
}

#[derive(Default, Deserialize)]
struct RawAttach {
    #[serde(default)]
    x: Option<Vec<u64>>,
    #[serde(default)]
    y: Option<Vec<u64>>,
    #[serde(default)]
    z: Option<Vec<u64>>,
    #[serde(default)]
    z2: Option<Vec<u64>>,
    #[serde(default)]
    u: Option<Vec<u64>>,
    #[serde(default)]
    w: Option<Vec<u64>>,
}
