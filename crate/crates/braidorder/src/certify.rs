//! The order-preservation certificate.
//!
//! An automorphism in conjugacy form sends each generator to a conjugate of
//! a generator, `x_i ↦ w_i x_{σ(i)} w_i^-1`, with `σ` fixing a distinguished
//! index `i0`. Writing `h` for the net `x_{i0}` exponent and `h_O` for its
//! sum over an orbit `O` of `σ`, the certificate checks per orbit:
//!
//! * `gcd(|O|, h_O) = 1` (with `gcd(r, 0) = r`) — enough for an invariant
//!   bi-ordering;
//! * `h_O ≠ 0` whenever `|O| >= 2` — enough for an invariant left ordering.
//!
//! The orbit `{i0}` itself is exempt. Verdicts rank
//! `BI_ORDER_PRESERVING > LEFT_ORDER_PRESERVING > INCONCLUSIVE`.

use serde::Serialize;
use thiserror::Error;

use crate::braid::Permutation;
use crate::words::{Endomorphism, ExponentHom, FreeGroup, Gen, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("NOT_CONJUGACY_FORM: the image of x{generator} is not a conjugate w x_j w^-1 of a generator")]
    NotConjugacyForm { generator: u32 },
    #[error("SIGMA_NOT_BIJECTIVE: the conjugated generators do not form a permutation")]
    SigmaNotBijective,
    #[error("I0_NOT_FIXED: sigma moves the distinguished index {i0}")]
    I0NotFixed { i0: u32 },
    #[error("NO_FIXED_POINT: sigma fixes no index, so no exponent homomorphism is available")]
    NoFixedPoint,
    #[error("conjugacy form is malformed: {0}")]
    Malformed(String),
}

/// An automorphism presented as `x_i ↦ w_i x_{σ(i)} w_i^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyForm {
    group: FreeGroup,
    sigma: Permutation,
    conjugators: Vec<Word>,
}

impl ConjugacyForm {
    pub fn new(
        group: FreeGroup,
        sigma: Permutation,
        conjugators: Vec<Word>,
    ) -> Result<Self, CertifyError> {
        if sigma.degree() != group.rank() {
            return Err(CertifyError::Malformed(format!(
                "sigma degree {} does not match rank {}",
                sigma.degree(),
                group.rank()
            )));
        }
        if conjugators.len() != group.rank() as usize {
            return Err(CertifyError::Malformed(format!(
                "{} conjugators for rank {}",
                conjugators.len(),
                group.rank()
            )));
        }
        for w in &conjugators {
            group
                .check(w)
                .map_err(|e| CertifyError::Malformed(e.to_string()))?;
        }
        Ok(ConjugacyForm { group, sigma, conjugators })
    }

    pub fn group(&self) -> FreeGroup {
        self.group
    }

    pub fn rank(&self) -> u32 {
        self.group.rank()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn conjugator(&self, i: Gen) -> &Word {
        &self.conjugators[(i.index() - 1) as usize]
    }

    /// Rebuilds the underlying endomorphism `x_i ↦ w_i x_{σ(i)} w_i^-1`.
    pub fn to_endomorphism(&self) -> Endomorphism {
        let images = self
            .group
            .gens()
            .map(|g| {
                let target = Word::generator(Gen::new(self.sigma.apply(g.index())));
                target.conjugated_by(self.conjugator(g))
            })
            .collect();
        Endomorphism::new(self.group, images).expect("conjugators were range-checked")
    }
}

/// Reads the conjugacy form off an endomorphism, or reports the first
/// generator whose image has the wrong shape.
pub fn extract_conjugacy_form(endo: &Endomorphism) -> Result<ConjugacyForm, CertifyError> {
    let group = endo.group();
    let mut sigma_images = Vec::with_capacity(group.rank() as usize);
    let mut conjugators = Vec::with_capacity(group.rank() as usize);
    for g in group.gens() {
        let letters: Vec<(Gen, i64)> = endo.image(g).letters().collect();
        if letters.len().is_multiple_of(2) {
            // Even reduced length: cannot be a conjugate of a single letter.
            return Err(CertifyError::NotConjugacyForm { generator: g.index() });
        }
        let m = letters.len() / 2;
        let (mid, mid_sign) = letters[m];
        if mid_sign != 1 {
            return Err(CertifyError::NotConjugacyForm { generator: g.index() });
        }
        let prefix = Word::from_runs(letters[..m].iter().copied());
        let suffix = Word::from_runs(letters[m + 1..].iter().copied());
        if suffix != prefix.inverse() {
            return Err(CertifyError::NotConjugacyForm { generator: g.index() });
        }
        sigma_images.push(mid.index());
        conjugators.push(prefix);
    }
    let sigma =
        Permutation::from_images(sigma_images).map_err(|_| CertifyError::SigmaNotBijective)?;
    ConjugacyForm::new(group, sigma, conjugators)
}

/// Per-orbit data backing a verdict. The orbit tuple starts at its least
/// element and follows `σ`; `h_values` are the conjugator `h`-values in the
/// same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub orbit: Vec<u32>,
    pub h_values: Vec<i64>,
    pub h_o: i64,
    pub gcd_value: i64,
    pub passes_gcd: bool,
    pub passes_nonvanishing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Inconclusive,
    LeftOrderPreserving,
    BiOrderPreserving,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::BiOrderPreserving => "BI_ORDER_PRESERVING",
            Verdict::LeftOrderPreserving => "LEFT_ORDER_PRESERVING",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The full certificate for one choice of `i0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub i0: Gen,
    pub verdict: Verdict,
    pub reports: Vec<OrbitReport>,
}

#[derive(Serialize)]
struct OrbitWire<'a> {
    orbit: &'a [u32],
    h_values: &'a [i64],
    #[serde(rename = "h_O")]
    h_o: i64,
    gcd: i64,
}

#[derive(Serialize)]
struct CertificateWire<'a> {
    i0: u32,
    verdict: &'a str,
    orbits: Vec<OrbitWire<'a>>,
}

impl Certificate {
    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = CertificateWire {
            i0: self.i0.index(),
            verdict: self.verdict.as_str(),
            orbits: self
                .reports
                .iter()
                .map(|r| OrbitWire {
                    orbit: &r.orbit,
                    h_values: &r.h_values,
                    h_o: r.h_o,
                    gcd: r.gcd_value,
                })
                .collect(),
        };
        serde_json::to_value(wire).expect("certificate serialization cannot fail")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("certificate serialization cannot fail")
    }
}

fn evaluate(form: &ConjugacyForm, i0: Gen) -> Result<Certificate, CertifyError> {
    if i0.index() > form.rank() {
        return Err(CertifyError::Malformed(format!(
            "i0 = {} out of range for rank {}",
            i0.index(),
            form.rank()
        )));
    }
    if form.sigma.apply(i0.index()) != i0.index() {
        return Err(CertifyError::I0NotFixed { i0: i0.index() });
    }
    let h = ExponentHom::new(i0);
    let mut reports = Vec::new();
    for orbit in form.sigma.orbits() {
        if orbit.len() == 1 && orbit[0] == i0.index() {
            continue;
        }
        let h_values: Vec<i64> =
            orbit.iter().map(|&k| h.eval(form.conjugator(Gen::new(k)))).collect();
        let h_o: i64 = h_values.iter().sum();
        let r = orbit.len() as i64;
        let gcd_value = num_integer::gcd(r, h_o);
        reports.push(OrbitReport {
            passes_gcd: gcd_value == 1,
            passes_nonvanishing: r == 1 || h_o != 0,
            orbit,
            h_values,
            h_o,
            gcd_value,
        });
    }
    let verdict = if reports.iter().all(|r| r.passes_gcd) {
        Verdict::BiOrderPreserving
    } else if reports.iter().all(|r| r.passes_nonvanishing) {
        Verdict::LeftOrderPreserving
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate { i0, verdict, reports })
}

/// Certifies at a chosen fixed index. A `BI_ORDER_PRESERVING` verdict means
/// the gcd test passed on every orbit; the weaker left-order flag is still
/// reported per orbit.
pub fn certify_biorder(form: &ConjugacyForm, i0: Gen) -> Result<Certificate, CertifyError> {
    evaluate(form, i0)
}

/// Same evaluation, named for the weaker criterion: a verdict of at least
/// `LEFT_ORDER_PRESERVING` means every orbit of size `>= 2` has `h_O ≠ 0`.
pub fn certify_left(form: &ConjugacyForm, i0: Gen) -> Result<Certificate, CertifyError> {
    evaluate(form, i0)
}

/// Tries every fixed point of `σ` and returns the best certificate,
/// preferring stronger verdicts and then smaller `i0`.
pub fn certify_all(form: &ConjugacyForm) -> Result<Certificate, CertifyError> {
    let mut best: Option<Certificate> = None;
    for i0 in form.sigma.fixed_points() {
        let cert = evaluate(form, Gen::new(i0))?;
        let better = match &best {
            None => true,
            Some(b) => cert.verdict > b.verdict,
        };
        if better {
            let done = cert.verdict == Verdict::BiOrderPreserving;
            best = Some(cert);
            if done {
                break;
            }
        }
    }
    best.ok_or(CertifyError::NoFixedPoint)
}
