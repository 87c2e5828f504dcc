//! Scalar functions `q`, coefficient recipes `a₀`, `a_λ`, and their
//! realization at chamber points.
//!
//! Profile literals:
//!
//! - `q`: `id:C` (alias `lin:C`), `tanh:C`, `sinh:C`, `ln:C`, `exp:C`,
//!   `coth:C`, `const:v`, weighted sums such as `2*sinh:1+lin:0.5`, or
//!   per-root constants `roots:1,2`;
//! - `a₀`: `const:κ` or `contact` (`1/(2r)`);
//! - `a_λ`: `explicit:v` (or one value per root, comma separated), `ak`
//!   (almost-Kähler rule) or `contact`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symspace::roots::RestrictedRootData;

/// Elementary kinds; every kind is scaled by its parameter `C` as `p(C·t)`,
/// except `Linear` (`C·t`) and `Constant` (the value itself).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    Linear,
    Tanh,
    Sinh,
    Log1p,
    Expm1,
    Coth,
    Constant,
}

impl ProfileKind {
    fn literal(&self) -> &'static str {
        match self {
            ProfileKind::Linear => "id",
            ProfileKind::Tanh => "tanh",
            ProfileKind::Sinh => "sinh",
            ProfileKind::Log1p => "ln",
            ProfileKind::Expm1 => "exp",
            ProfileKind::Coth => "coth",
            ProfileKind::Constant => "const",
        }
    }

    /// Every kind, used by property tests and the catalog listing.
    pub const ALL: [ProfileKind; 7] = [
        ProfileKind::Linear,
        ProfileKind::Tanh,
        ProfileKind::Sinh,
        ProfileKind::Log1p,
        ProfileKind::Expm1,
        ProfileKind::Coth,
        ProfileKind::Constant,
    ];
}

/// A member of the closed family of functions `q : (0,∞) → (0,∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ScalarProfile {
    Basic { kind: ProfileKind, param: f64 },
    /// `Σ weight·p`, all weights positive.
    Combination(Vec<(f64, ScalarProfile)>),
}

/// Behaviour of `q(t)/t` as `t → 0⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LimitClass {
    Finite(f64),
    Infinite,
    Zero,
}

/// Which of value or first derivative to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Value,
    Derivative,
}

impl ScalarProfile {
    pub fn basic(kind: ProfileKind, param: f64) -> Self {
        ScalarProfile::Basic { kind, param }
    }

    pub fn identity() -> Self {
        Self::basic(ProfileKind::Linear, 1.0)
    }

    pub fn tanh() -> Self {
        Self::basic(ProfileKind::Tanh, 1.0)
    }

    fn value_unchecked(&self, t: f64) -> f64 {
        match self {
            ScalarProfile::Basic { kind, param: c } => match kind {
                ProfileKind::Linear => c * t,
                ProfileKind::Tanh => (c * t).tanh(),
                ProfileKind::Sinh => (c * t).sinh(),
                ProfileKind::Log1p => (c * t).ln_1p(),
                ProfileKind::Expm1 => (c * t).exp_m1(),
                ProfileKind::Coth => 1.0 / (c * t).tanh(),
                ProfileKind::Constant => *c,
            },
            ScalarProfile::Combination(parts) => parts.iter().map(|(w, p)| w * p.value_unchecked(t)).sum(),
        }
    }

    fn derivative_unchecked(&self, t: f64) -> f64 {
        match self {
            ScalarProfile::Basic { kind, param: c } => match kind {
                ProfileKind::Linear => *c,
                ProfileKind::Tanh => c / (c * t).cosh().powi(2),
                ProfileKind::Sinh => c * (c * t).cosh(),
                ProfileKind::Log1p => c / (1.0 + c * t),
                ProfileKind::Expm1 => c * (c * t).exp(),
                ProfileKind::Coth => -c / (c * t).sinh().powi(2),
                ProfileKind::Constant => 0.0,
            },
            ScalarProfile::Combination(parts) => parts.iter().map(|(w, p)| w * p.derivative_unchecked(t)).sum(),
        }
    }

    /// `q(t)` or `q′(t)` in closed form.
    pub fn eval(&self, t: f64, mode: EvalMode) -> Result<f64> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::NonPositiveArgument(t));
        }
        Ok(match mode {
            EvalMode::Value => self.value_unchecked(t),
            EvalMode::Derivative => self.derivative_unchecked(t),
        })
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.eval(t, EvalMode::Value)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.eval(t, EvalMode::Derivative)
    }

    /// Analytic class of `lim_{t→0⁺} q(t)/t`.
    pub fn limit_class(&self) -> LimitClass {
        match self {
            ScalarProfile::Basic { kind, param } => match kind {
                ProfileKind::Coth | ProfileKind::Constant => LimitClass::Infinite,
                _ => LimitClass::Finite(*param),
            },
            ScalarProfile::Combination(parts) => {
                let mut sum = 0.0;
                for (w, p) in parts {
                    match p.limit_class() {
                        LimitClass::Infinite => return LimitClass::Infinite,
                        LimitClass::Finite(l) => sum += w * l,
                        LimitClass::Zero => {}
                    }
                }
                if sum > 0.0 {
                    LimitClass::Finite(sum)
                } else {
                    LimitClass::Zero
                }
            }
        }
    }

    /// `q(t)/t` at `t = 10^{-k}` for `k = 3..=6`.
    pub fn limit_samples(&self) -> Vec<f64> {
        (3..=6).map(|k| 10f64.powi(-k)).map(|t| self.value_unchecked(t) / t).collect()
    }

    /// Numerical class from the samples: growth by a factor above 5 per
    /// decade is infinite, otherwise the last sample is the limit.
    pub fn numeric_limit_class(&self) -> LimitClass {
        let s = self.limit_samples();
        let (prev, last) = (s[2], s[3]);
        if last > 5.0 * prev && last > 1e3 {
            LimitClass::Infinite
        } else if last.abs() < 1e-9 {
            LimitClass::Zero
        } else {
            LimitClass::Finite(last)
        }
    }

    /// Whether the numeric class agrees with the analytic one (finite limits
    /// within `1e-4` relative).
    pub fn limit_cross_check(&self) -> bool {
        match (self.limit_class(), self.numeric_limit_class()) {
            (LimitClass::Finite(a), LimitClass::Finite(b)) => ((a - b) / a).abs() <= 1e-4,
            (a, b) => a == b,
        }
    }

    /// `1 − q(t)² − q′(t)`.
    pub fn riccati_residual(&self, t: f64) -> Result<f64> {
        let q = self.value(t)?;
        Ok(1.0 - q * q - self.derivative(t)?)
    }
}

impl fmt::Display for ScalarProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarProfile::Basic { kind, param } => write!(f, "{}:{}", kind.literal(), param),
            ScalarProfile::Combination(parts) => {
                for (i, (w, p)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{w}*{p}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid number `{s}` in {what}")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Parse(format!("{what} must be positive, got `{s}`")));
    }
    Ok(v)
}

fn parse_basic(s: &str) -> Result<ScalarProfile> {
    let (name, param) = match s.split_once(':') {
        Some((n, p)) => (n.trim(), Some(parse_number(p, "profile parameter")?)),
        None => (s.trim(), None),
    };
    let kind = match name {
        "id" | "lin" | "identity" => ProfileKind::Linear,
        "tanh" => ProfileKind::Tanh,
        "sinh" => ProfileKind::Sinh,
        "ln" | "log1p" => ProfileKind::Log1p,
        "exp" | "expm1" => ProfileKind::Expm1,
        "coth" => ProfileKind::Coth,
        "const" => ProfileKind::Constant,
        other => return Err(Error::Parse(format!("unknown profile kind `{other}`"))),
    };
    Ok(ScalarProfile::basic(kind, param.unwrap_or(1.0)))
}

impl FromStr for ScalarProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms: Vec<&str> = s.split('+').collect();
        if terms.iter().any(|t| t.trim().is_empty()) {
            return Err(Error::Parse(format!("empty term in profile `{s}`")));
        }
        let mut parts = Vec::new();
        for term in &terms {
            let (w, body) = match term.split_once('*') {
                Some((w, b)) => (parse_number(w, "combination weight")?, b),
                None => (1.0, *term),
            };
            parts.push((w, parse_basic(body)?));
        }
        if parts.len() == 1 && parts[0].0 == 1.0 {
            Ok(parts.pop().unwrap().1)
        } else {
            Ok(ScalarProfile::Combination(parts))
        }
    }
}

/// How `q_λ` is assigned to each positive root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum QAssignment {
    /// `q_λ(w) = q(λ_R(w))`.
    Function(ScalarProfile),
    /// Constant `q_λ`, one value per positive root (a single value is shared).
    PerRoot(Vec<f64>),
}

impl fmt::Display for QAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QAssignment::Function(p) => write!(f, "{p}"),
            QAssignment::PerRoot(v) => write!(f, "roots:{}", join(v)),
        }
    }
}

impl FromStr for QAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().strip_prefix("roots:") {
            Some(rest) => Ok(QAssignment::PerRoot(parse_list(rest, "per-root q")?)),
            None => Ok(QAssignment::Function(s.parse()?)),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    let out = s.split(',').map(|x| parse_number(x, what)).collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(Error::Parse(format!("empty list in {what}")));
    }
    Ok(out)
}

fn pick(v: &[f64], i: usize) -> f64 {
    if v.len() == 1 {
        v[0]
    } else {
        v[i]
    }
}

/// Recipe for `a₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum A0Recipe {
    /// `a₀ = κ`.
    Constant(f64),
    /// `a₀ = 1/(2r)`.
    ContactRule,
}

impl fmt::Display for A0Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            A0Recipe::Constant(k) => write!(f, "const:{k}"),
            A0Recipe::ContactRule => write!(f, "contact"),
        }
    }
}

impl FromStr for A0Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "contact" {
            return Ok(A0Recipe::ContactRule);
        }
        match s.strip_prefix("const:") {
            Some(v) => Ok(A0Recipe::Constant(parse_number(v, "a0 constant")?)),
            None => Err(Error::Parse(format!("unknown a0 recipe `{s}`"))),
        }
    }
}

/// Recipe for `a_λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ALambdaRecipe {
    /// Constants per root (a single value is shared).
    Explicit(Vec<f64>),
    /// `a_λ = a₀²λ_R(w)/q_λ(w)`.
    AlmostKahler,
    /// `a_λ = a₀λ_R(w)/(2r·q_λ(w))`.
    Contact,
}

impl fmt::Display for ALambdaRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ALambdaRecipe::Explicit(v) => write!(f, "explicit:{}", join(v)),
            ALambdaRecipe::AlmostKahler => write!(f, "ak"),
            ALambdaRecipe::Contact => write!(f, "contact"),
        }
    }
}

impl FromStr for ALambdaRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "ak" => Ok(ALambdaRecipe::AlmostKahler),
            "contact" => Ok(ALambdaRecipe::Contact),
            _ => match s.strip_prefix("explicit:") {
                Some(rest) => Ok(ALambdaRecipe::Explicit(parse_list(rest, "a_lambda constants")?)),
                None => Err(Error::Parse(format!("unknown a_lambda recipe `{s}`"))),
            },
        }
    }
}

/// Full coefficient data of the structure `(J^q, 𝐠)` or `(φ^q, ξ, η, 𝐠̃)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureProfile {
    pub q: QAssignment,
    pub a0: A0Recipe,
    pub alambda: ALambdaRecipe,
    /// Sphere radius; required by the contact recipes.
    pub radius: Option<f64>,
    /// Multiply `a_λ` of one root by a factor (negative controls).
    pub perturbation: Option<(usize, f64)>,
}

/// Coefficients at a chamber point, with gradients in `𝔞`-coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Realized {
    pub a0: f64,
    pub lambda: Vec<f64>,
    pub q: Vec<f64>,
    /// `q′(λ_R(w))` (zero for per-root constants).
    pub dq: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub grad_q: Vec<DVector<f64>>,
    pub grad_a: Vec<DVector<f64>>,
    pub grad_b: Vec<DVector<f64>>,
}

impl StructureProfile {
    pub fn new(q: QAssignment, a0: A0Recipe, alambda: ALambdaRecipe, radius: Option<f64>) -> Self {
        Self {
            q,
            a0,
            alambda,
            radius,
            perturbation: None,
        }
    }

    /// The Sasaki data: `q = id`, `a₀ = 1`, `a_λ = 1`.
    pub fn standard(radius: Option<f64>) -> Self {
        Self::new(
            QAssignment::Function(ScalarProfile::identity()),
            A0Recipe::Constant(1.0),
            ALambdaRecipe::Explicit(vec![1.0]),
            radius,
        )
    }

    /// The contact family with `a₀ = 1/(2r)`.
    pub fn contact(q: QAssignment, radius: f64) -> Self {
        Self::new(q, A0Recipe::ContactRule, ALambdaRecipe::Contact, Some(radius))
    }

    /// The rank-one contact family with `a₀ = κ`.
    pub fn contact_kappa(q: QAssignment, kappa: f64, radius: f64) -> Self {
        Self::new(q, A0Recipe::Constant(kappa), ALambdaRecipe::Contact, Some(radius))
    }

    pub fn almost_kahler(q: ScalarProfile, a0: f64) -> Self {
        Self::new(QAssignment::Function(q), A0Recipe::Constant(a0), ALambdaRecipe::AlmostKahler, None)
    }

    pub fn with_perturbation(mut self, root: usize, factor: f64) -> Self {
        self.perturbation = Some((root, factor));
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    fn radius(&self) -> Result<f64> {
        match self.radius {
            Some(r) if r > 0.0 => Ok(r),
            Some(r) => Err(Error::NonPositiveArgument(r)),
            None => Err(Error::MissingRadius),
        }
    }

    /// `a₀` (independent of `w`).
    pub fn a0_value(&self) -> Result<f64> {
        match self.a0 {
            A0Recipe::Constant(k) => Ok(k),
            A0Recipe::ContactRule => Ok(1.0 / (2.0 * self.radius()?)),
        }
    }

    /// Evaluates every coefficient at `w ∈ W`.
    pub fn realize(&self, roots: &RestrictedRootData, w: &DVector<f64>) -> Result<Realized> {
        let n = roots.root_count();
        let rank = roots.rank();
        if w.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: w.len() });
        }
        let a0 = self.a0_value()?;
        let mut out = Realized {
            a0,
            lambda: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            dq: Vec::with_capacity(n),
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            grad_q: Vec::with_capacity(n),
            grad_a: Vec::with_capacity(n),
            grad_b: Vec::with_capacity(n),
        };
        for (i, root) in roots.roots.iter().enumerate() {
            let lambda = root.value(w);
            if lambda <= 0.0 {
                return Err(Error::OnWall { root: i, value: lambda });
            }
            let cov = &root.covector;
            let (q, dq) = match &self.q {
                QAssignment::Function(p) => (p.value(lambda)?, p.derivative(lambda)?),
                QAssignment::PerRoot(v) => {
                    if v.len() != 1 && v.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
                    }
                    (pick(v, i), 0.0)
                }
            };
            // a = f(λ) with f depending on the recipe; df/dλ through q.
            let (a, da) = match &self.alambda {
                ALambdaRecipe::Explicit(v) => {
                    if v.len() != 1 && v.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
                    }
                    (pick(v, i), 0.0)
                }
                ALambdaRecipe::AlmostKahler => (a0 * a0 * lambda / q, a0 * a0 * (q - lambda * dq) / (q * q)),
                ALambdaRecipe::Contact => {
                    let c = a0 / (2.0 * self.radius()?);
                    (c * lambda / q, c * (q - lambda * dq) / (q * q))
                }
            };
            let factor = match self.perturbation {
                Some((j, f)) if j == i => f,
                _ => 1.0,
            };
            let (a, da) = (a * factor, da * factor);
            let b = a * q * q;
            let db = da * q * q + 2.0 * a * q * dq;
            for (name, v) in [("q", q), ("a", a), ("b", b)] {
                if !(v > 0.0) {
                    return Err(Error::NonPositiveCoefficient {
                        name: format!("{name}[{}]", root.label),
                        value: v,
                    });
                }
            }
            out.lambda.push(lambda);
            out.q.push(q);
            out.dq.push(dq);
            out.a.push(a);
            out.b.push(b);
            out.grad_q.push(cov * dq);
            out.grad_a.push(cov * da);
            out.grad_b.push(cov * db);
        }
        if !(a0 > 0.0) {
            return Err(Error::NonPositiveCoefficient { name: "a0".into(), value: a0 });
        }
        Ok(out)
    }

    /// Compact literal summary used in reports.
    pub fn describe(&self) -> String {
        let mut s = format!("q={} a0={} alambda={}", self.q, self.a0, self.alambda);
        if let Some(r) = self.radius {
            s.push_str(&format!(" r={r}"));
        }
        if let Some((i, f)) = self.perturbation {
            s.push_str(&format!(" perturb[{i}]={f}"));
        }
        s
    }
}

/// Coefficients of the metric induced by the Sasaki metric on `T_r(G/K)` in
/// rank one: `1` on `𝔪_λ` and `λ_R(rX)²` on `𝔨_λ`, that is `r²` on `𝔨_ε` and
/// `r²/4` on `𝔨_{ε/2}`. Returned as `(a, b)` per root.
pub fn induced_standard_metric(roots: &RestrictedRootData, radius: f64) -> Result<Vec<(f64, f64)>> {
    if roots.rank() != 1 {
        return Err(Error::UnsupportedRank {
            op: "induced standard metric",
            rank: roots.rank(),
        });
    }
    if !(radius > 0.0) {
        return Err(Error::NonPositiveArgument(radius));
    }
    Ok(roots
        .roots
        .iter()
        .map(|r| {
            let l = r.covector[0] * radius;
            (1.0, l * l)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        for lit in ["tanh:1", "id:2", "2*sinh:1+1*id:0.5", "const:3", "coth:1"] {
            let p: ScalarProfile = lit.parse().unwrap();
            let again: ScalarProfile = p.to_string().parse().unwrap();
            assert_eq!(p, again, "{lit}");
        }
        assert_eq!("id".parse::<ScalarProfile>().unwrap(), ScalarProfile::identity());
        assert!("tanh:-1".parse::<ScalarProfile>().is_err());
        assert!("cosh:1".parse::<ScalarProfile>().is_err());
        assert_eq!("roots:1,2".parse::<QAssignment>().unwrap(), QAssignment::PerRoot(vec![1.0, 2.0]));
        assert_eq!("contact".parse::<A0Recipe>().unwrap(), A0Recipe::ContactRule);
        assert_eq!("const:1".parse::<A0Recipe>().unwrap(), A0Recipe::Constant(1.0));
        assert_eq!("ak".parse::<ALambdaRecipe>().unwrap(), ALambdaRecipe::AlmostKahler);
    }

    #[test]
    fn elementary_values() {
        let t: ScalarProfile = "tanh:1".parse().unwrap();
        assert!((t.value(1.0).unwrap() - 0.761594155955765).abs() < 1e-12);
        assert_eq!(ScalarProfile::identity().derivative(0.3).unwrap(), 1.0);
        let c: ScalarProfile = "2*tanh:1+3*sinh:1".parse().unwrap();
        let expect = 2.0 * 0.5f64.tanh() + 3.0 * 0.5f64.sinh();
        assert!((c.value(0.5).unwrap() - expect).abs() < 1e-15);
        assert!(matches!(t.value(0.0), Err(Error::NonPositiveArgument(_))));
    }

    #[test]
    fn riccati() {
        assert!(ScalarProfile::tanh().riccati_residual(0.7).unwrap().abs() < 1e-15);
        let id = ScalarProfile::identity();
        assert!((id.riccati_residual(0.5).unwrap() + 0.25).abs() < 1e-15);
        let coth: ScalarProfile = "coth:1".parse().unwrap();
        assert!(coth.riccati_residual(1.3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn limits() {
        assert_eq!(ScalarProfile::tanh().limit_class(), LimitClass::Finite(1.0));
        assert_eq!("coth:1".parse::<ScalarProfile>().unwrap().limit_class(), LimitClass::Infinite);
        let s3: ScalarProfile = "sinh:3".parse().unwrap();
        assert_eq!(s3.limit_class(), LimitClass::Finite(3.0));
        assert!(s3.limit_cross_check());
        assert!("const:2".parse::<ScalarProfile>().unwrap().limit_cross_check());
    }
}
