//! Catalog of the three concrete systems: central charges, structure
//! constants, structure-function root families, factored forms, and the
//! documented spectrum formulas they are validated against.
//!
//! Formulas marked "printed" are carried verbatim from the reference
//! closed forms, including their known internal inconsistencies; the solver
//! derives values independently and reports disagreements instead of
//! trusting either side.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::StructureConstants;
use crate::poly::{Poly, RootList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemId {
    /// Generalized MICZ-Kepler system on E3 (monopole + Coulomb + singular terms).
    Micz3d,
    /// 4D double singular oscillator, the dual partner of the system above.
    Osc4d,
    /// MICZ-Kepler system on the three-sphere.
    MiczS3,
}

impl SystemId {
    pub const ALL: [SystemId; 3] = [SystemId::Micz3d, SystemId::Osc4d, SystemId::MiczS3];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::Micz3d => "micz3d",
            SystemId::Osc4d => "osc4d",
            SystemId::MiczS3 => "miczs3",
        }
    }

    /// Charge symbols required before the energy is known.
    pub fn charge_symbols(self) -> &'static [&'static str] {
        match self {
            SystemId::Micz3d => &["m", "s", "c1", "c2"],
            SystemId::Osc4d => &["m", "s", "c1", "c2", "omega"],
            SystemId::MiczS3 => &["m", "mu", "alpha", "R"],
        }
    }

    /// Degree of the structure function, i.e. number of root descriptors.
    pub fn root_count(self) -> usize {
        match self {
            SystemId::MiczS3 => 8,
            _ => 6,
        }
    }
}

impl std::fmt::Display for SystemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SystemId {
    type Err = SystemsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "micz3d" => Ok(SystemId::Micz3d),
            "osc4d" => Ok(SystemId::Osc4d),
            "miczs3" => Ok(SystemId::MiczS3),
            other => Err(SystemsError::UnknownSystem(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SystemsError {
    #[error("unknown system: {0}")]
    UnknownSystem(String),
    #[error("missing central charge: {0}")]
    MissingCharge(String),
    #[error("central charge out of range: {0} must be positive")]
    NonPositive(&'static str),
    #[error("coupling below critical strength: no self-adjoint radial problem")]
    Subcritical,
    #[error("bound-state branch requires E < 0")]
    BoundStateBranch,
}

/// Named central-charge values fixed before representation theory; the
/// energy E joins the map once a solver or caller determines it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Charges {
    map: BTreeMap<String, f64>,
}

impl Charges {
    pub fn new() -> Self {
        Charges::default()
    }

    pub fn parse(pairs: &[(&str, f64)]) -> Self {
        let mut c = Charges::new();
        for &(k, v) in pairs {
            c.insert(k, v);
        }
        c
    }

    pub fn insert(&mut self, symbol: &str, value: f64) {
        self.map.insert(symbol.to_string(), value);
    }

    pub fn with(mut self, symbol: &str, value: f64) -> Self {
        self.insert(symbol, value);
        self
    }

    pub fn get(&self, symbol: &str) -> Option<f64> {
        self.map.get(symbol).copied()
    }

    pub fn require(&self, symbol: &str) -> Result<f64, SystemsError> {
        self.get(symbol)
            .ok_or_else(|| SystemsError::MissingCharge(symbol.to_string()))
    }

    /// Deterministic (sorted) iteration, used by the report writers.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Checks completeness (without E) and the sign constraints on the
    /// geometric charges.
    pub fn validate_for(&self, system: SystemId) -> Result<(), SystemsError> {
        for &sym in system.charge_symbols() {
            self.require(sym)?;
        }
        if let Some(w) = self.get("omega") {
            if w <= 0.0 {
                return Err(SystemsError::NonPositive("omega"));
            }
        }
        if let Some(r) = self.get("R") {
            if r <= 0.0 {
                return Err(SystemsError::NonPositive("R"));
            }
        }
        Ok(())
    }
}

/// The index shifts m1, m2 entering the root families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveIndices {
    pub m1: f64,
    pub m2: f64,
}

/// The reference text gives the oscillator indices without a square root;
/// that literal reading is kept available for discrepancy reporting, while
/// the square-root reading is the working one (it alone reduces to integer
/// oscillator indices at c1 = c2 = 0 and closes the duality identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexConvention {
    #[default]
    SquareRoot,
    PrintedLiteral,
}

pub fn effective_indices(
    system: SystemId,
    charges: &Charges,
) -> Result<EffectiveIndices, SystemsError> {
    effective_indices_with(system, charges, IndexConvention::SquareRoot)
}

pub fn effective_indices_with(
    system: SystemId,
    charges: &Charges,
    convention: IndexConvention,
) -> Result<EffectiveIndices, SystemsError> {
    // A vanishing radicand is admissible only for couplings >= 0 (e.g. the
    // plain hydrogen reduction); it marks the criticality boundary when the
    // coupling is attractive.
    let index = |radicand: f64, coupling: f64| -> Result<f64, SystemsError> {
        if radicand < 0.0 || (radicand == 0.0 && coupling < 0.0) {
            Err(SystemsError::Subcritical)
        } else {
            Ok(radicand.sqrt())
        }
    };
    match system {
        SystemId::Micz3d => {
            let m = charges.require("m")?;
            let s = charges.require("s")?;
            let c1 = charges.require("c1")?;
            let c2 = charges.require("c2")?;
            Ok(EffectiveIndices {
                m1: index((m - s) * (m - s) + 4.0 * c1, c1)?,
                m2: index((m + s) * (m + s) + 4.0 * c2, c2)?,
            })
        }
        SystemId::Osc4d => {
            let m = charges.require("m")?;
            let s = charges.require("s")?;
            let c1 = charges.require("c1")?;
            let c2 = charges.require("c2")?;
            let r1 = (m + s) * (m + s) + 2.0 * c1;
            let r2 = (m - s) * (m - s) + 2.0 * c2;
            match convention {
                IndexConvention::SquareRoot => Ok(EffectiveIndices {
                    m1: index(r1, c1)?,
                    m2: index(r2, c2)?,
                }),
                IndexConvention::PrintedLiteral => Ok(EffectiveIndices { m1: r1, m2: r2 }),
            }
        }
        SystemId::MiczS3 => Ok(EffectiveIndices {
            m1: charges.require("m")?.abs(),
            m2: charges.require("mu")?.abs(),
        }),
    }
}

/// The documented structure constants at the given charges (E included).
pub fn structure_constants(
    system: SystemId,
    charges: &Charges,
) -> Result<StructureConstants, SystemsError> {
    charges.validate_for(system)?;
    let e = charges.require("E")?;
    Ok(match system {
        SystemId::Micz3d => {
            let m = charges.require("m")?;
            let s = charges.require("s")?;
            let c1 = charges.require("c1")?;
            let c2 = charges.require("c2")?;
            StructureConstants::special(
                2.0,
                4.0 * s * m + 4.0 * (c2 - c1),
                0.0,
                8.0 * e,
                (-4.0 * m * m - 4.0 * s * s - 4.0 * (2.0 * c1 + 2.0 * c2 - 1.0)) * e + 2.0,
            )
        }
        SystemId::Osc4d => {
            let m = charges.require("m")?;
            let s = charges.require("s")?;
            let c1 = charges.require("c1")?;
            let c2 = charges.require("c2")?;
            let w = charges.require("omega")?;
            StructureConstants::special(
                2.0,
                4.0 * m * s * e - 2.0 * (c1 - c2) * e,
                0.0,
                -16.0 * w * w,
                2.0 * e * e - 8.0 * w * w * (m * m + s * s) + 8.0 * (c1 + c2 - 1.0) * w * w,
            )
        }
        SystemId::MiczS3 => {
            let m = charges.require("m")?;
            let mu = charges.require("mu")?;
            let alpha = charges.require("alpha")?;
            let r = charges.require("R")?;
            StructureConstants::special(
                2.0,
                4.0 * alpha * mu * m,
                -6.0 / (r * r),
                8.0 * e + 4.0 * (m * m + mu * mu - 1.0) / (r * r),
                2.0 * alpha * alpha + 4.0 * e * (1.0 - m * m - mu * mu)
                    - 2.0 * m * m * mu * mu / (r * r),
            )
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    EnergyPair,
    IndexFamily,
    CurvaturePair,
}

/// One root position of the structure function in the (x + u) variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootValue {
    pub kind: RootKind,
    /// Sign tag within the family, e.g. "index+-".
    pub label: &'static str,
    /// May be NaN (curvature pair off the real branch); the solver skips
    /// such descriptors and handles the pair as a quadratic factor instead.
    pub value: f64,
}

const MICZ3D_LABELS: [(&str, RootKind); 6] = [
    ("energy+", RootKind::EnergyPair),
    ("energy-", RootKind::EnergyPair),
    ("index++", RootKind::IndexFamily),
    ("index+-", RootKind::IndexFamily),
    ("index-+", RootKind::IndexFamily),
    ("index--", RootKind::IndexFamily),
];

const MICZS3_LABELS: [(&str, RootKind); 8] = [
    ("index-m", RootKind::IndexFamily),
    ("index+m", RootKind::IndexFamily),
    ("index-mu", RootKind::IndexFamily),
    ("index+mu", RootKind::IndexFamily),
    ("curvature--", RootKind::CurvaturePair),
    ("curvature-+", RootKind::CurvaturePair),
    ("curvature+-", RootKind::CurvaturePair),
    ("curvature++", RootKind::CurvaturePair),
];

pub fn root_label(system: SystemId, idx: usize) -> (&'static str, RootKind) {
    match system {
        SystemId::MiczS3 => MICZS3_LABELS[idx],
        _ => MICZ3D_LABELS[idx],
    }
}

/// Root position rho_idx(E) in the (x + u) variable, NaN where the
/// descriptor leaves the real branch. Index order is fixed and doubles as
/// the pairing index in solver output.
pub fn root_position(
    system: SystemId,
    charges: &Charges,
    idx: usize,
    e: f64,
) -> Result<f64, SystemsError> {
    match system {
        SystemId::Micz3d => {
            let ei = effective_indices(system, charges)?;
            let nu = if e < 0.0 {
                1.0 / (-2.0 * e).sqrt()
            } else {
                f64::NAN
            };
            Ok(match idx {
                0 => 0.5 + nu,
                1 => 0.5 - nu,
                _ => index_family(idx, ei),
            })
        }
        SystemId::Osc4d => {
            let ei = effective_indices(system, charges)?;
            let w = charges.require("omega")?;
            Ok(match idx {
                0 => 0.5 - e / (2.0 * w),
                1 => 0.5 + e / (2.0 * w),
                _ => index_family(idx, ei),
            })
        }
        SystemId::MiczS3 => {
            let m = charges.require("m")?;
            let mu = charges.require("mu")?;
            let (eprime, s) = sphere_branch(charges, e)?;
            Ok(match idx {
                0 => 0.5 - m,
                1 => 0.5 + m,
                2 => 0.5 - mu,
                3 => 0.5 + mu,
                4 => 0.5 - half_sqrt2(eprime - s),
                5 => 0.5 + half_sqrt2(eprime - s),
                6 => 0.5 - half_sqrt2(eprime + s),
                7 => 0.5 + half_sqrt2(eprime + s),
                _ => unreachable!("miczs3 has 8 root descriptors"),
            })
        }
    }
}

pub(crate) fn index_family(idx: usize, ei: EffectiveIndices) -> f64 {
    let (s1, s2) = match idx {
        2 => (1.0, 1.0),
        3 => (1.0, -1.0),
        4 => (-1.0, 1.0),
        5 => (-1.0, -1.0),
        _ => unreachable!("index family occupies descriptor slots 2..=5"),
    };
    0.5 - (s1 * ei.m1 + s2 * ei.m2) / 2.0
}

/// (E', S) with E' = 1 + 2 E R^2 and S = sqrt(E'^2 + 4 R^2 alpha^2).
fn sphere_branch(charges: &Charges, e: f64) -> Result<(f64, f64), SystemsError> {
    let alpha = charges.require("alpha")?;
    let r = charges.require("R")?;
    let eprime = 1.0 + 2.0 * e * r * r;
    let s = (eprime * eprime + 4.0 * r * r * alpha * alpha).sqrt();
    Ok((eprime, s))
}

fn half_sqrt2(t: f64) -> f64 {
    // (sqrt(2)/2) sqrt(t); NaN off the real branch (t < 0).
    if t >= 0.0 {
        (0.5 * t).sqrt()
    } else {
        f64::NAN
    }
}

/// All root positions with kind and sign tags.
pub fn structure_roots(
    system: SystemId,
    charges: &Charges,
    e: f64,
) -> Result<Vec<RootValue>, SystemsError> {
    if system == SystemId::Micz3d && e >= 0.0 {
        return Err(SystemsError::BoundStateBranch);
    }
    (0..system.root_count())
        .map(|idx| {
            let (label, kind) = root_label(system, idx);
            Ok(RootValue {
                kind,
                label,
                value: root_position(system, charges, idx, e)?,
            })
        })
        .collect()
}

/// Linear factors plus an optional always-quadratic factor for assembling
/// the structure function at a given E.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiFactors {
    /// Root positions in the (x + u) variable, always real.
    pub linear: Vec<f64>,
    /// ((x + u) - center)^2 + offset with offset >= 0; carries the sphere
    /// curvature pair, which has no real roots off the alpha = 0 branch.
    pub quad: Option<(f64, f64)>,
}

impl PhiFactors {
    /// The structure function as a polynomial in x at shift u, normalized to
    /// a negative leading coefficient of unit magnitude. The factored
    /// closed forms of all three systems carry a negative leading
    /// coefficient, and only this orientation makes the interior of a
    /// physical module positive.
    pub fn phi_poly(&self, u: f64, scale: f64) -> Poly {
        let xroots: Vec<f64> = self.linear.iter().map(|rho| rho - u).collect();
        let base = Poly::from_roots(&xroots, -scale);
        match self.quad {
            None => base,
            Some((center, offset)) => {
                let c = center - u;
                let quad = Poly::new(vec![c * c + offset, -2.0 * c, 1.0]);
                base.mul(&quad)
            }
        }
    }
}

pub fn phi_factors(system: SystemId, charges: &Charges, e: f64) -> Result<PhiFactors, SystemsError> {
    match system {
        SystemId::MiczS3 => {
            let mut linear = Vec::with_capacity(6);
            for idx in [0, 1, 2, 3, 6, 7] {
                linear.push(root_position(system, charges, idx, e)?);
            }
            let (eprime, s) = sphere_branch(charges, e)?;
            Ok(PhiFactors {
                linear,
                quad: Some((0.5, (s - eprime) / 2.0)),
            })
        }
        _ => {
            if system == SystemId::Micz3d && e >= 0.0 {
                return Err(SystemsError::BoundStateBranch);
            }
            let linear = (0..6)
                .map(|idx| root_position(system, charges, idx, e))
                .collect::<Result<Vec<f64>, _>>()?;
            Ok(PhiFactors { linear, quad: None })
        }
    }
}

/// The factored closed form of the structure function at a solved
/// representation: explicit roots, positive prefactor, and (for the sphere)
/// the positive-definite quadratic factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPhi {
    pub roots: RootList,
    pub scale: f64,
    pub quad: Option<Poly>,
    /// Number of descending printed factors (r - x); fixes the sign linking
    /// the root product to the printed orientation.
    descending: usize,
}

impl FactoredPhi {
    /// The printed orientation as a polynomial: positive between the module
    /// boundary roots 0 and p+1.
    pub fn poly(&self) -> Poly {
        let sign = if self.descending % 2 == 0 { 1.0 } else { -1.0 };
        let base = Poly::from_roots(&self.roots.expanded(), sign * self.scale);
        match &self.quad {
            None => base,
            Some(q) => base.mul(q),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly().eval(x)
    }
}

pub fn factored_phi(
    system: SystemId,
    p: u32,
    idx: &EffectiveIndices,
    charges: &Charges,
) -> Result<FactoredPhi, SystemsError> {
    let pp1 = (p + 1) as f64;
    match system {
        SystemId::Micz3d | SystemId::Osc4d => {
            let (m1, m2) = (idx.m1, idx.m2);
            let roots = RootList::from_values(vec![
                0.0,
                pp1,
                pp1 + m1,
                pp1 + m2,
                pp1 + m1 + m2,
                2.0 * pp1 + m1 + m2,
            ]);
            let scale = match system {
                SystemId::Micz3d => {
                    let span = pp1 + m1 + m2;
                    3.0 * (2f64).powi(21) / (span * span)
                }
                _ => {
                    let w = charges.require("omega")?;
                    3.0 * (2f64).powi(19) * w * w
                }
            };
            Ok(FactoredPhi {
                roots,
                scale,
                quad: None,
                descending: 5,
            })
        }
        SystemId::MiczS3 => {
            let m = charges.require("m")?;
            let mu = charges.require("mu")?.abs();
            let alpha = charges.require("alpha")?;
            let r = charges.require("R")?;
            let n = pp1 + mu;
            let roots = RootList::from_values(vec![
                0.0,
                pp1,
                -2.0 * mu,
                -(m + mu),
                m - mu,
                -(pp1 + mu),
            ]);
            // (2x + 2mu)^2 + R^2 alpha^2 / (p+1+mu)^2, kept explicit.
            let quad = Poly::new(vec![
                4.0 * mu * mu + r * r * alpha * alpha / (n * n),
                8.0 * mu,
                4.0,
            ]);
            Ok(FactoredPhi {
                roots,
                scale: 3.0 * (2f64).powi(18) / (r * r),
                quad: Some(quad),
                descending: 1,
            })
        }
    }
}

/// The literal documented (E, u) for a p-level module. These are candidate
/// values for comparison, not ground truth; see compare_printed.
pub fn printed_spectrum(
    system: SystemId,
    p: u32,
    idx: &EffectiveIndices,
    charges: &Charges,
) -> Result<(f64, f64), SystemsError> {
    let pp1 = (p + 1) as f64;
    match system {
        SystemId::Micz3d => {
            let span = pp1 + idx.m1 + idx.m2;
            let e = -1.0 / (2.0 * span * span);
            Ok((e, 0.5 + 1.0 / (-2.0 * e).sqrt()))
        }
        SystemId::Osc4d => {
            let w = charges.require("omega")?;
            let e = 2.0 * w * (pp1 + (idx.m1 + idx.m2) / 2.0);
            Ok((e, 0.5 - e / (2.0 * w)))
        }
        SystemId::MiczS3 => {
            let alpha = charges.require("alpha")?;
            let r = charges.require("R")?;
            let mu = charges.require("mu")?.abs();
            let n = pp1 + mu;
            let e = -alpha * alpha / (2.0 * n * n) + (n * n - 1.0) / (2.0 * r * r);
            Ok((e, 0.5 + mu))
        }
    }
}

/// Parabolic/double-polar quantum numbers and the data deriving the
/// principal quantum number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNumberMap {
    pub n1: u32,
    pub n2: u32,
    pub m: f64,
    pub s: f64,
    pub idx: EffectiveIndices,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalNumber {
    pub n: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Candidate bound-state energy -1/(2 (n + (delta1+delta2)/2)^2).
    pub candidate_energy: f64,
}

pub fn principal_quantum_number(map: &QuantumNumberMap) -> PrincipalNumber {
    let n = map.n1 as f64
        + map.n2 as f64
        + ((map.m - map.s).abs() + (map.m + map.s).abs()) / 2.0
        + 1.0;
    let delta1 = map.idx.m1 - (map.m - map.s).abs();
    let delta2 = map.idx.m2 - (map.m + map.s).abs();
    let span = n + (delta1 + delta2) / 2.0;
    PrincipalNumber {
        n,
        delta1,
        delta2,
        candidate_energy: -1.0 / (2.0 * span * span),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn micz(m: f64, s: f64, c1: f64, c2: f64) -> Charges {
        Charges::parse(&[("m", m), ("s", s), ("c1", c1), ("c2", c2)])
    }

    #[test]
    fn effective_index_examples() {
        let ei = effective_indices(SystemId::Micz3d, &micz(0.0, 0.0, 2.0, 0.0)).unwrap();
        assert_relative_eq!(ei.m1, 2.0 * (2f64).sqrt(), max_relative = 1e-15);
        assert_eq!(ei.m2, 0.0);

        let ei = effective_indices(SystemId::Micz3d, &micz(0.5, 0.5, 0.0, 0.0)).unwrap();
        assert_eq!((ei.m1, ei.m2), (0.0, 1.0));

        assert_eq!(
            effective_indices(SystemId::Micz3d, &micz(0.0, 1.0, -0.25, 0.0)),
            Err(SystemsError::Subcritical)
        );
    }

    #[test]
    fn effective_index_reduction_at_zero_coupling() {
        for m2 in -6..=6 {
            for s2 in -6..=6 {
                let (m, s) = (m2 as f64 / 2.0, s2 as f64 / 2.0);
                let e3 = effective_indices(SystemId::Micz3d, &micz(m, s, 0.0, 0.0)).unwrap();
                assert_eq!((e3.m1, e3.m2), ((m - s).abs(), (m + s).abs()));
                let c = micz(m, s, 0.0, 0.0).with("omega", 1.0);
                let e4 = effective_indices(SystemId::Osc4d, &c).unwrap();
                assert_eq!((e4.m1, e4.m2), ((m + s).abs(), (m - s).abs()));
            }
        }
    }

    #[test]
    fn printed_literal_oscillator_reading_skips_the_square_root() {
        let c = micz(1.0, 0.0, 0.5, 0.0).with("omega", 1.0);
        let lit =
            effective_indices_with(SystemId::Osc4d, &c, IndexConvention::PrintedLiteral).unwrap();
        assert_eq!((lit.m1, lit.m2), (2.0, 1.0));
        let sqrt = effective_indices(SystemId::Osc4d, &c).unwrap();
        assert_relative_eq!(sqrt.m1, (2f64).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn structure_constant_examples() {
        let sc =
            structure_constants(SystemId::Micz3d, &micz(0.0, 0.0, 0.0, 0.0).with("E", -0.5))
                .unwrap();
        assert_eq!((sc.gamma, sc.zeta, sc.d, sc.z, sc.a), (2.0, 0.0, -4.0, 0.0, 0.0));

        let osc = Charges::parse(&[
            ("m", 0.0),
            ("s", 0.0),
            ("c1", 0.0),
            ("c2", 0.0),
            ("omega", 1.0),
            ("E", 2.0),
        ]);
        let sc = structure_constants(SystemId::Osc4d, &osc).unwrap();
        assert_eq!((sc.gamma, sc.d, sc.zeta, sc.z), (2.0, -16.0, 0.0, 0.0));

        let sphere = Charges::parse(&[
            ("m", 0.0),
            ("mu", 0.0),
            ("alpha", 1.0),
            ("R", 1.0),
            ("E", 0.0),
        ]);
        let sc = structure_constants(SystemId::MiczS3, &sphere).unwrap();
        assert_eq!((sc.gamma, sc.zeta, sc.a, sc.d, sc.z), (2.0, 0.0, -6.0, -4.0, 2.0));
    }

    #[test]
    fn micz3d_root_values_at_ground_energy() {
        let roots = structure_roots(SystemId::Micz3d, &micz(0.0, 0.0, 0.0, 0.0), -0.5).unwrap();
        let values: Vec<f64> = roots.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![1.5, -0.5, 0.5, 0.5, 0.5, 0.5]);
        assert_eq!(roots[0].label, "energy+");
        assert_eq!(
            structure_roots(SystemId::Micz3d, &micz(0.0, 0.0, 0.0, 0.0), 0.25),
            Err(SystemsError::BoundStateBranch)
        );
    }

    #[test]
    fn osc4d_root_values() {
        let c = micz(0.0, 0.0, 0.0, 0.0).with("omega", 1.0);
        let roots = structure_roots(SystemId::Osc4d, &c, 2.0).unwrap();
        let values: Vec<f64> = roots.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![-0.5, 1.5, 0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn sphere_root_values_on_the_alpha_zero_branch() {
        let c = Charges::parse(&[("m", 0.0), ("mu", 0.0), ("alpha", 0.0), ("R", 1.0)]);
        // E = 1.5 gives E' = 4, S = 4: curvature- collapses to a double root
        // at 1/2 and curvature+ spans 1/2 +- 2.
        let roots = structure_roots(SystemId::MiczS3, &c, 1.5).unwrap();
        let values: Vec<f64> = roots.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![0.5, 0.5, 0.5, 0.5, 0.5, 0.5, -1.5, 2.5]);
    }

    #[test]
    fn sphere_curvature_pair_leaves_real_branch_when_alpha_nonzero() {
        let c = Charges::parse(&[("m", 0.0), ("mu", 0.0), ("alpha", 1.0), ("R", 1.0)]);
        let roots = structure_roots(SystemId::MiczS3, &c, 0.5).unwrap();
        assert!(roots[4].value.is_nan() && roots[5].value.is_nan());
        assert!(roots[6].value.is_finite() && roots[7].value.is_finite());
        // The solver-side factor list is nonetheless complete: the pair is
        // carried as a positive-definite quadratic.
        let f = phi_factors(SystemId::MiczS3, &c, 0.5).unwrap();
        assert_eq!(f.linear.len(), 6);
        let (center, offset) = f.quad.unwrap();
        assert_eq!(center, 0.5);
        assert!(offset > 0.0);
    }

    #[test]
    fn index_family_is_symmetric_about_one_half() {
        for system in [SystemId::Micz3d, SystemId::Osc4d] {
            let mut c = micz(1.5, 0.5, 0.3, 0.7);
            if system == SystemId::Osc4d {
                c.insert("omega", 2.0);
            }
            let e = if system == SystemId::Micz3d { -0.1 } else { 3.0 };
            let roots = structure_roots(system, &c, e).unwrap();
            let mut fam: Vec<f64> = roots
                .iter()
                .filter(|r| r.kind == RootKind::IndexFamily)
                .map(|r| r.value)
                .collect();
            fam.sort_by(|a, b| a.total_cmp(b));
            for k in 0..2 {
                let sum = fam[k] + fam[3 - k];
                assert!((sum - 1.0).abs() < 1e-12, "pair sums to {sum}");
            }
        }
    }

    #[test]
    fn factored_phi_examples() {
        let f = factored_phi(
            SystemId::Micz3d,
            2,
            &EffectiveIndices { m1: 1.0, m2: 2.0 },
            &micz(0.0, 0.0, 0.0, 0.0),
        )
        .unwrap();
        assert_eq!(f.roots.expanded(), vec![0.0, 3.0, 4.0, 5.0, 6.0, 9.0]);
        assert_relative_eq!(f.scale, 3.0 * (2f64).powi(21) / 36.0, max_relative = 1e-15);

        let c = micz(0.0, 0.0, 0.0, 0.0).with("omega", 1.0);
        let f = factored_phi(SystemId::Osc4d, 0, &EffectiveIndices { m1: 0.0, m2: 0.0 }, &c)
            .unwrap();
        assert_eq!(f.roots.roots, vec![0.0, 1.0, 2.0]);
        assert_eq!(f.roots.multiplicities, vec![1, 4, 1]);

        let c = Charges::parse(&[("m", 0.0), ("mu", 0.0), ("alpha", 1.0), ("R", 1.0)]);
        let f = factored_phi(SystemId::MiczS3, 1, &EffectiveIndices { m1: 0.0, m2: 0.0 }, &c)
            .unwrap();
        assert_eq!(f.roots.roots, vec![-2.0, 0.0, 2.0]);
        assert_eq!(f.roots.multiplicities, vec![1, 4, 1]);
        // Quadratic factor (2x)^2 + R^2 alpha^2 / 4.
        assert_eq!(f.quad.as_ref().unwrap().coeffs(), &[0.25, 0.0, 4.0]);
    }

    #[test]
    fn factored_phi_always_contains_the_module_boundary_roots() {
        let c3 = micz(1.0, 0.5, 0.4, 0.2);
        let c4 = c3.clone().with("omega", 0.7);
        let cs = Charges::parse(&[("m", 1.0), ("mu", 0.5), ("alpha", 0.3), ("R", 2.0)]);
        for p in 0..4u32 {
            for (system, charges) in [
                (SystemId::Micz3d, &c3),
                (SystemId::Osc4d, &c4),
                (SystemId::MiczS3, &cs),
            ] {
                let idx = effective_indices(system, charges).unwrap();
                let f = factored_phi(system, p, &idx, charges).unwrap();
                let has = |v: f64| f.roots.roots.iter().any(|&r| (r - v).abs() < 1e-12);
                assert!(has(0.0) && has((p + 1) as f64));
            }
        }
    }

    #[test]
    fn canonical_pattern_value_at_unit_scale() {
        // x (2-x)^4 (4-x) at x = 1, the p=1 zero-index module at unit scale.
        let mut f = factored_phi(
            SystemId::Micz3d,
            1,
            &EffectiveIndices { m1: 0.0, m2: 0.0 },
            &micz(0.0, 0.0, 0.0, 0.0),
        )
        .unwrap();
        f.scale = 1.0;
        assert_eq!(f.eval(1.0), 3.0);
    }

    #[test]
    fn printed_spectrum_examples() {
        let (e, u) = printed_spectrum(
            SystemId::Micz3d,
            0,
            &EffectiveIndices { m1: 0.0, m2: 0.0 },
            &micz(0.0, 0.0, 0.0, 0.0),
        )
        .unwrap();
        assert_eq!((e, u), (-0.5, 1.5));

        let c = micz(0.0, 0.0, 0.0, 0.0).with("omega", 0.5);
        let (e, u) = printed_spectrum(SystemId::Osc4d, 2, &EffectiveIndices { m1: 1.0, m2: 2.0 }, &c)
            .unwrap();
        assert_eq!((e, u), (4.5, -4.0));

        let c = Charges::parse(&[("m", 0.0), ("mu", 1.0), ("alpha", 1.0), ("R", 2.0)]);
        let (e, u) = printed_spectrum(SystemId::MiczS3, 1, &EffectiveIndices { m1: 0.0, m2: 1.0 }, &c)
            .unwrap();
        assert_relative_eq!(e, -1.0 / 18.0 + 1.0, max_relative = 1e-15);
        assert_eq!(u, 1.5);
    }

    #[test]
    fn sphere_printed_spectrum_flat_limit_is_monotone() {
        let c = Charges::parse(&[("m", 0.0), ("mu", 0.0), ("alpha", 0.0), ("R", 3.0)]);
        let idx = EffectiveIndices { m1: 0.0, m2: 0.0 };
        let mut last = -1.0;
        for p in 0..6 {
            let (e, _) = printed_spectrum(SystemId::MiczS3, p, &idx, &c).unwrap();
            let pp1 = (p + 1) as f64;
            assert_relative_eq!(e, (pp1 * pp1 - 1.0) / 18.0, max_relative = 1e-14);
            assert!(e >= 0.0 && e > last);
            last = e;
        }
    }

    #[test]
    fn principal_quantum_number_examples() {
        let idx = EffectiveIndices { m1: 1.0, m2: 1.0 };
        let pn = principal_quantum_number(&QuantumNumberMap {
            n1: 0,
            n2: 0,
            m: 1.0,
            s: 0.0,
            idx,
        });
        assert_eq!(pn.n, 2.0);
        assert_eq!((pn.delta1, pn.delta2), (0.0, 0.0));

        let pn = principal_quantum_number(&QuantumNumberMap {
            n1: 1,
            n2: 1,
            m: 0.5,
            s: 0.5,
            idx: EffectiveIndices { m1: 0.0, m2: 1.0 },
        });
        assert_eq!(pn.n, 3.5);

        let pn = principal_quantum_number(&QuantumNumberMap {
            n1: 0,
            n2: 0,
            m: 0.0,
            s: 0.0,
            idx: EffectiveIndices { m1: 0.0, m2: 0.0 },
        });
        assert_eq!((pn.n, pn.delta1, pn.delta2), (1.0, 0.0, 0.0));
        assert_eq!(pn.candidate_energy, -0.5);
    }

    #[test]
    fn parabolic_hydrogen_relation_at_zero_monopole() {
        for n1 in 0..4u32 {
            for n2 in 0..4u32 {
                for m_twice in -4..=4 {
                    let m = m_twice as f64;
                    let pn = principal_quantum_number(&QuantumNumberMap {
                        n1,
                        n2,
                        m,
                        s: 0.0,
                        idx: EffectiveIndices { m1: m.abs(), m2: m.abs() },
                    });
                    assert_eq!(pn.n, n1 as f64 + n2 as f64 + m.abs() + 1.0);
                }
            }
        }
    }

    #[test]
    fn charge_validation_messages() {
        let c = Charges::parse(&[("m", 0.0), ("s", 0.0), ("c1", 0.0), ("c2", 0.0)]);
        let err = c.validate_for(SystemId::Osc4d).unwrap_err();
        assert_eq!(err.to_string(), "missing central charge: omega");
        let c = c.with("omega", -1.0);
        assert_eq!(
            c.validate_for(SystemId::Osc4d).unwrap_err().to_string(),
            "central charge out of range: omega must be positive"
        );
        assert_eq!(
            "nope".parse::<SystemId>().unwrap_err().to_string(),
            "unknown system: nope"
        );
    }

    #[test]
    fn phi_poly_orientation_is_positive_inside_the_module() {
        // Hydrogen p=1: roots in x are {0, 2 (x4), 4} at u = -3/2; the
        // negative-lead orientation is positive on (0, 2).
        let charges = micz(0.0, 0.0, 0.0, 0.0);
        let f = phi_factors(SystemId::Micz3d, &charges, -0.125).unwrap();
        let phi = f.phi_poly(-1.5, 1.0);
        assert!((phi.eval(1.0) - 3.0).abs() < 1e-12);
        assert_eq!(phi.eval(0.0), 0.0);
        assert!(phi.eval(2.0).abs() < 1e-12);
    }
}
