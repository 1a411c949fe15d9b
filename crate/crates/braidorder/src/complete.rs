//! Completing factors: multiply a braid by a constructed `α` so that the
//! product's Artin action certifiably preserves a bi-ordering.
//!
//! Three routes. Axis conjugates keep a designated strand `n` fixed and
//! repair each cycle `c` with `gcd(|c|, h_c) ≠ 1` by appending powers of the
//! pure braid `A_{min(c), n}`, each of which raises `h_c` by exactly one.
//! Three-strand braids are stabilized by a short power of `σ₁`, found by
//! direct certification. For a general braid whose permutation moves the
//! top strand, a completing permutation `τ` (fixing the top strand) turns
//! `στ` into a single fixed point plus an `(n−1)`-cycle, after which even
//! powers of `σ_{i0}` repair the gcd, one unit of `h` per `σ_{i0}²`.

use serde_json::{json, Value};
use thiserror::Error;

use crate::braid::{pure_braid_generator, BraidError, BraidWord, Permutation};
use crate::certify::{
    certify_all, certify_biorder, extract_conjugacy_form, Certificate, CertifyError, Verdict,
};
use crate::words::Gen;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompleteError {
    #[error("USES_TOP_STRAND: braid word uses generator s{generator}; the top strand must stay free")]
    UsesTopStrand { generator: u32 },
    #[error("TOO_FEW_STRANDS: this construction needs at least {needed} strands, got {got}")]
    TooFewStrands { got: u32, needed: u32 },
    #[error("WRONG_STRANDS: this construction needs exactly {expected} strands, got {got}")]
    WrongStrands { got: u32, expected: u32 },
    #[error("TOP_STRAND_FIXED: the permutation already fixes {n}; use the axis or pure route instead")]
    TopStrandFixed { n: u32 },
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// A completing factor together with the certified product and a log of the
/// per-cycle choices that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionResult {
    pub alpha: BraidWord,
    pub product: BraidWord,
    pub certificate: Certificate,
    pub steps: Vec<String>,
}

impl CompletionResult {
    pub fn to_json_value(&self) -> Value {
        json!({
            "alpha": self.alpha.to_string(),
            "product": self.product.to_string(),
            "certificate": self.certificate.to_json_value(),
            "steps": self.steps,
        })
    }
}

fn fmt_cycle(cycle: &[u32]) -> String {
    let parts: Vec<String> = cycle.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Certifies `beta = product` at `i0` and packages the result, insisting on
/// the full bi-order verdict (the constructions guarantee it).
fn finish(
    alpha: BraidWord,
    product: BraidWord,
    i0: u32,
    mut steps: Vec<String>,
) -> Result<CompletionResult, CompleteError> {
    let form = extract_conjugacy_form(&product.artin_action())
        .expect("braid actions are always in conjugacy form");
    let certificate = certify_biorder(&form, Gen::new(i0))?;
    assert_eq!(
        certificate.verdict,
        Verdict::BiOrderPreserving,
        "completion must certify: {}",
        certificate.to_json()
    );
    steps.push(format!("certified at i0 = {i0}: {}", certificate.verdict));
    Ok(CompletionResult { alpha, product, certificate, steps })
}

/// Completes a braid that never touches strand `n` by appending, for each
/// cycle `c` of its permutation, the smallest power `A_{min(c), n}^k` with
/// `gcd(|c|, h_c + k) = 1`. Certifies the product at `i0 = n`.
pub fn complete_with_axis_conjugates(beta: &BraidWord) -> Result<CompletionResult, CompleteError> {
    let n = beta.strands();
    if n < 3 {
        return Err(CompleteError::TooFewStrands { got: n, needed: 3 });
    }
    let top = (n - 1) as i32;
    if beta.letters().iter().any(|&l| l.abs() == top) {
        return Err(CompleteError::UsesTopStrand { generator: n - 1 });
    }
    let form = extract_conjugacy_form(&beta.artin_action())
        .expect("braid actions are always in conjugacy form");
    let base = certify_biorder(&form, Gen::new(n))?;
    let mut alpha = BraidWord::identity(n);
    let mut steps = Vec::new();
    for report in &base.reports {
        let r = report.orbit.len() as i64;
        let mut k = 0i64;
        while num_integer::gcd(r, report.h_o + k) != 1 {
            k += 1;
        }
        debug_assert!(k <= r, "h_c + k = 1 mod |c| is reachable within one period");
        let cycle = fmt_cycle(&report.orbit);
        if k == 0 {
            steps.push(format!(
                "cycle {cycle}: gcd({r}, {}) = 1, no factor needed",
                report.h_o
            ));
        } else {
            let i = report.orbit[0];
            let a = pure_braid_generator(i, n, n).expect("min(c) < n is a valid axis pair");
            alpha = alpha.compose(&a.power(k))?;
            steps.push(format!(
                "cycle {cycle}: gcd({r}, {}) = {}, appended A_{{{i},{n}}}^{k} raising h_c to {}",
                report.h_o,
                report.gcd_value,
                report.h_o + k
            ));
        }
    }
    let product = beta.compose(&alpha)?;
    finish(alpha, product, n, steps)
}

/// Finds the smallest `k ∈ {0,..,3}` making `β σ₁^k` certify, by direct
/// certification over all fixed points. Always succeeds on three strands.
pub fn b3_stabilize(beta: &BraidWord) -> Result<(u32, CompletionResult), CompleteError> {
    if beta.strands() != 3 {
        return Err(CompleteError::WrongStrands { got: beta.strands(), expected: 3 });
    }
    let sigma1 = BraidWord::generator(3, 1).expect("s1 exists on 3 strands");
    for k in 0u32..=3 {
        let alpha = sigma1.power(k as i64);
        let product = beta.compose(&alpha)?;
        let form = extract_conjugacy_form(&product.artin_action())
            .expect("braid actions are always in conjugacy form");
        match certify_all(&form) {
            Ok(certificate) if certificate.verdict == Verdict::BiOrderPreserving => {
                let steps = vec![
                    format!("alpha = s1^{k}, the smallest power certifying the product"),
                    format!("certified at i0 = {}: {}", certificate.i0.index(), certificate.verdict),
                ];
                return Ok((k, CompletionResult { alpha, product, certificate, steps }));
            }
            Ok(_) => continue,
            Err(CertifyError::NoFixedPoint) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    unreachable!("some k <= 3 always completes a 3-braid")
}

/// The completing permutation `τ` for `σ` moving `n`, with the fixed point
/// and the `(n−1)`-cycle of `στ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationCompletion {
    pub tau: Permutation,
    pub c1_fixed_point: u32,
    pub c2: Vec<u32>,
}

/// Builds `τ` fixing `n` such that `στ` decomposes as one fixed point
/// `≤ n−2` plus an `(n−1)`-cycle through `n`: set `j = σ^{-1}(n)`, list
/// `{1..n}∖{j,n}` ascending (swapping the last two entries if the last is
/// `n−1`), keep the final entry as the fixed point, and route the cycle
/// `(j n i₁ … i_{n−3})` through the rest.
pub fn permutation_completion(sigma: &Permutation) -> Result<PermutationCompletion, CompleteError> {
    let n = sigma.degree();
    if n < 4 {
        return Err(CompleteError::TooFewStrands { got: n, needed: 4 });
    }
    if sigma.apply(n) == n {
        return Err(CompleteError::TopStrandFixed { n });
    }
    let j = sigma.inverse().apply(n);
    let mut rest: Vec<u32> = (1..n).filter(|&v| v != j).collect();
    let m = rest.len();
    if rest[m - 1] == n - 1 {
        rest.swap(m - 1, m - 2);
    }
    let c1_fixed_point = rest[m - 1];
    debug_assert!(c1_fixed_point <= n - 2);
    let mut c2 = vec![j, n];
    c2.extend_from_slice(&rest[..m - 1]);
    let target = Permutation::from_cycle(n, &c2)?;
    let tau = sigma.inverse().compose(&target);
    debug_assert_eq!(tau.apply(n), n);
    debug_assert_eq!(sigma.compose(&tau), target);
    Ok(PermutationCompletion { tau, c1_fixed_point, c2 })
}

/// Completes an arbitrary braid with a factor from the lower braid group:
/// if the permutation fixes strand `n`, a positive lift of its inverse
/// makes the product pure; otherwise the lift of `τ` from
/// [`permutation_completion`] followed by `σ_{i0}^{2ℓ}` (each square raises
/// the long cycle's `h`-sum by one) reaches `gcd(h + ℓ, n−1) = 1`. Three
/// strands delegate to [`b3_stabilize`].
pub fn stabilize_in_lower_braid(beta: &BraidWord) -> Result<CompletionResult, CompleteError> {
    let n = beta.strands();
    if n < 3 {
        return Err(CompleteError::TooFewStrands { got: n, needed: 3 });
    }
    if n == 3 {
        let (k, mut result) = b3_stabilize(beta)?;
        result.steps.insert(0, format!("three strands: stabilized directly with s1^{k}"));
        return Ok(result);
    }
    let sigma = beta.underlying_permutation();
    if sigma.apply(n) == n {
        let alpha = sigma.inverse().positive_braid_lift();
        debug_assert!(alpha.letters().iter().all(|&l| l.abs() < (n - 1) as i32));
        let product = beta.compose(&alpha)?;
        debug_assert!(product.underlying_permutation().is_identity());
        let steps = vec![format!(
            "permutation fixes strand {n}: alpha lifts its inverse, the product is pure"
        )];
        return finish(alpha, product, n, steps);
    }
    let pc = permutation_completion(&sigma)?;
    let i0 = pc.c1_fixed_point;
    let mut alpha = pc.tau.positive_braid_lift();
    debug_assert!(alpha.letters().iter().all(|&l| l.abs() < (n - 1) as i32));
    let mut steps = vec![format!(
        "completed the permutation: fixed point {i0}, long cycle {}",
        fmt_cycle(&pc.c2)
    )];
    let candidate = beta.compose(&alpha)?;
    let form = extract_conjugacy_form(&candidate.artin_action())
        .expect("braid actions are always in conjugacy form");
    let base = certify_biorder(&form, Gen::new(i0))?;
    debug_assert_eq!(base.reports.len(), 1, "one fixed point plus one long cycle");
    let h = base.reports[0].h_o;
    let r = (n - 1) as i64;
    let mut ell = 0i64;
    while num_integer::gcd(r, h + ell) != 1 {
        ell += 1;
    }
    debug_assert!(ell < r);
    if ell == 0 {
        steps.push(format!("long cycle has gcd({r}, {h}) = 1 already"));
    } else {
        alpha = alpha.compose(
            &BraidWord::generator(n, i0 as i32).expect("i0 <= n-2 names a generator").power(2 * ell),
        )?;
        steps.push(format!(
            "long cycle has gcd({r}, {h}) != 1: appended s{i0}^{} raising the h-sum to {}",
            2 * ell,
            h + ell
        ));
    }
    let product = beta.compose(&alpha)?;
    finish(alpha, product, i0, steps)
}

/// Stabilizes into one more strand and completes there with axis
/// conjugates; always applicable.
pub fn two_more_components(beta: &BraidWord) -> Result<CompletionResult, CompleteError> {
    let wider = beta.embed(beta.strands() + 1)?;
    let mut result = complete_with_axis_conjugates(&wider)?;
    result.steps.insert(0, format!("embedded into B_{}", beta.strands() + 1));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn braid(n: u32, s: &str) -> BraidWord {
        BraidWord::parse(n, s).unwrap()
    }

    fn random_braid(rng: &mut impl Rng, strands: u32, max_gen: u32, len: usize) -> BraidWord {
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let k = rng.gen_range(1..=max_gen as i32);
                if rng.gen_bool(0.5) {
                    k
                } else {
                    -k
                }
            })
            .collect();
        BraidWord::new(strands, letters).unwrap()
    }

    #[test]
    fn axis_completion_of_the_worked_example() {
        // σ₁σ₃ on five strands with the axis as the fifth: both two-cycles
        // have h_c = 0, so each gets a single axis conjugate.
        let beta = braid(5, "s1 s3");
        let result = complete_with_axis_conjugates(&beta).unwrap();
        let a15 = pure_braid_generator(1, 5, 5).unwrap();
        let a35 = pure_braid_generator(3, 5, 5).unwrap();
        assert_eq!(result.alpha, a15.compose(&a35).unwrap());
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
        assert_eq!(result.certificate.i0.index(), 5);
        assert_eq!(result.product, beta.compose(&result.alpha).unwrap());
    }

    #[test]
    fn the_published_alpha_also_certifies() {
        // The choice conjugating the other element of each cycle works too.
        let beta = braid(5, "s1 s3");
        let alpha = pure_braid_generator(4, 5, 5)
            .unwrap()
            .compose(&pure_braid_generator(2, 5, 5).unwrap())
            .unwrap();
        let product = beta.compose(&alpha).unwrap();
        let form = extract_conjugacy_form(&product.artin_action()).unwrap();
        let cert = certify_biorder(&form, Gen::new(5)).unwrap();
        assert_eq!(cert.verdict, Verdict::BiOrderPreserving);
    }

    #[test]
    fn axis_completion_of_a_pure_braid_is_empty() {
        let beta = braid(4, "s1^2 s2^-2");
        let result = complete_with_axis_conjugates(&beta).unwrap();
        assert!(result.alpha.is_empty());
        assert_eq!(result.product, beta);
    }

    #[test]
    fn axis_completion_of_sigma1_in_b3() {
        // β = σ₁ embedded in B₃: cycle {1,2} with h_c = 0 needs k = 1.
        let beta = braid(3, "s1");
        let result = complete_with_axis_conjugates(&beta).unwrap();
        assert_eq!(result.alpha, pure_braid_generator(1, 3, 3).unwrap());
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
    }

    #[test]
    fn axis_completion_rejects_top_strand_use() {
        let beta = braid(4, "s3");
        assert_eq!(
            complete_with_axis_conjugates(&beta),
            Err(CompleteError::UsesTopStrand { generator: 3 })
        );
    }

    #[test]
    fn axis_completion_random_braids_always_certify() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(3..=6u32);
            let len = rng.gen_range(0..=10usize);
            let beta = random_braid(&mut rng, n, n - 2, len);
            let result = complete_with_axis_conjugates(&beta).unwrap();
            assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
            assert_eq!(result.product, beta.compose(&result.alpha).unwrap());
        }
    }

    #[test]
    fn b3_stabilize_of_the_magic_braid_is_trivial() {
        let (k, result) = b3_stabilize(&braid(3, "s1^2 s2^-1")).unwrap();
        assert_eq!(k, 0);
        assert!(result.alpha.is_empty());
    }

    #[test]
    fn b3_stabilize_examples() {
        // Pure braids need nothing.
        let (k, _) = b3_stabilize(&braid(3, "s1^2")).unwrap();
        assert_eq!(k, 0);
        // σ₂ has permutation (2 3); the parity argument lands on k ∈ {0, 2}.
        let (k, result) = b3_stabilize(&braid(3, "s2")).unwrap();
        assert!(k == 0 || k == 2);
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
        // A 3-cycle needs at least one σ₁ to gain a fixed point.
        let (k, result) = b3_stabilize(&braid(3, "s1 s2")).unwrap();
        assert!((1..=3).contains(&k));
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
    }

    #[test]
    fn b3_stabilize_random_braids_stay_within_three() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let len = rng.gen_range(0..=10usize);
            let beta = random_braid(&mut rng, 3, 2, len);
            let (k, result) = b3_stabilize(&beta).unwrap();
            assert!(k <= 3);
            assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
            assert_eq!(result.product, beta.compose(&result.alpha).unwrap());
        }
    }

    #[test]
    fn b3_stabilize_needs_three_strands() {
        assert_eq!(
            b3_stabilize(&braid(4, "s1")),
            Err(CompleteError::WrongStrands { got: 4, expected: 3 })
        );
    }

    #[test]
    fn permutation_completion_worked_examples() {
        // n = 4, σ = (1 4): j = 1, remainder (2,3) must hide 3 = n−1 in the
        // cycle, so the fixed point is 2 and c₂ = (1 4 3).
        let sigma = Permutation::from_cycle(4, &[1, 4]).unwrap();
        let pc = permutation_completion(&sigma).unwrap();
        assert_eq!(pc.c1_fixed_point, 2);
        assert_eq!(pc.c2, vec![1, 4, 3]);
        assert_eq!(pc.tau.apply(4), 4);
        let product = sigma.compose(&pc.tau);
        assert_eq!(product, Permutation::from_cycle(4, &[1, 4, 3]).unwrap());

        // n = 5, σ = (4 5): j = 4, remainder (1,2,3) ends safely at 3.
        let sigma = Permutation::from_cycle(5, &[4, 5]).unwrap();
        let pc = permutation_completion(&sigma).unwrap();
        assert_eq!(pc.c1_fixed_point, 3);
        assert_eq!(pc.c2, vec![4, 5, 1, 2]);
        assert_eq!(
            sigma.compose(&pc.tau),
            Permutation::from_cycle(5, &[4, 5, 1, 2]).unwrap()
        );
    }

    #[test]
    fn permutation_completion_rejects_fixed_top() {
        let sigma = Permutation::from_cycle(4, &[1, 2]).unwrap();
        assert_eq!(
            permutation_completion(&sigma),
            Err(CompleteError::TopStrandFixed { n: 4 })
        );
        let small = Permutation::from_cycle(3, &[1, 3]).unwrap();
        assert_eq!(
            permutation_completion(&small),
            Err(CompleteError::TooFewStrands { got: 3, needed: 4 })
        );
    }

    #[test]
    fn permutation_completion_cycle_type_exhaustive_small() {
        // Over every σ moving n, στ must be one fixed point ≤ n−2 plus an
        // (n−1)-cycle through n.
        for n in [4u32, 5] {
            let mut count = 0;
            for sigma in all_permutations(n) {
                if sigma.apply(n) == n {
                    continue;
                }
                count += 1;
                let pc = permutation_completion(&sigma).unwrap();
                let product = sigma.compose(&pc.tau);
                assert_eq!(product.apply(pc.c1_fixed_point), pc.c1_fixed_point);
                assert!(pc.c1_fixed_point <= n - 2);
                let orbits = product.orbits();
                let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
                let mut sorted = sizes.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, vec![1, (n - 1) as usize]);
                assert!(pc.c2.contains(&n));
            }
            let expected = (1..=n).product::<u32>() - (1..n).product::<u32>();
            assert_eq!(count, expected);
        }
    }

    fn all_permutations(n: u32) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<u32> = (1..=n).collect();
        heap_permute(&mut images, n as usize, &mut out);
        out
    }

    fn heap_permute(images: &mut Vec<u32>, k: usize, out: &mut Vec<Permutation>) {
        if k == 1 {
            out.push(Permutation::from_images(images.clone()).unwrap());
            return;
        }
        for i in 0..k {
            heap_permute(images, k - 1, out);
            if k.is_multiple_of(2) {
                images.swap(i, k - 1);
            } else {
                images.swap(0, k - 1);
            }
        }
    }

    #[test]
    fn lower_braid_stabilization_examples() {
        // Pure braid in B₄: the lift is empty and the product unchanged.
        let beta = braid(4, "s1^2");
        let result = stabilize_in_lower_braid(&beta).unwrap();
        assert!(result.alpha.is_empty());
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);

        // σ₃ moves strand 4: the completion route must certify at the c₁ point.
        let beta = braid(4, "s3");
        let result = stabilize_in_lower_braid(&beta).unwrap();
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
        assert_eq!(result.certificate.i0.index(), 2);

        // Three strands delegate.
        let result = stabilize_in_lower_braid(&braid(3, "s1^2 s2^-1")).unwrap();
        assert!(result.alpha.is_empty());
        assert!(result.steps[0].contains("s1^0"));
    }

    #[test]
    fn lower_braid_alpha_avoids_the_top_generator() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let n = rng.gen_range(4..=6u32);
            let len = rng.gen_range(0..=8usize);
            let beta = random_braid(&mut rng, n, n - 1, len);
            let result = stabilize_in_lower_braid(&beta).unwrap();
            assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
            let i0 = result.certificate.i0.index();
            for &letter in result.alpha.letters() {
                let k = letter.unsigned_abs();
                assert!(
                    k < n - 1 || (k == i0 && i0 <= n - 2),
                    "alpha letter s{k} escapes B_{} (i0 = {i0})",
                    n - 1
                );
            }
            assert_eq!(result.product, beta.compose(&result.alpha).unwrap());
        }
    }

    #[test]
    fn two_more_components_always_completes() {
        let result = two_more_components(&braid(2, "s1")).unwrap();
        assert_eq!(result.product.strands(), 3);
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);

        let beta = braid(4, "s1 s3");
        let result = two_more_components(&beta).unwrap();
        assert_eq!(result.product.strands(), 5);
        assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);

        // Pure input needs no factor at all.
        let result = two_more_components(&braid(3, "s1^2 s2^2")).unwrap();
        assert!(result.alpha.is_empty());
    }

    #[test]
    fn completion_json_shape() {
        let result = complete_with_axis_conjugates(&braid(3, "s1")).unwrap();
        let v = result.to_json_value();
        assert_eq!(v["alpha"], "s2 s1^2 s2^-1");
        assert_eq!(v["certificate"]["verdict"], "BI_ORDER_PRESERVING");
        assert!(v["steps"].as_array().unwrap().len() >= 2);
        let text = serde_json::to_string(&v).unwrap();
        let keys: Vec<&str> = ["\"alpha\"", "\"product\"", "\"certificate\"", "\"steps\""]
            .into_iter()
            .collect();
        let mut last = 0;
        for key in keys {
            let pos = text.find(key).unwrap();
            assert!(pos >= last, "keys must keep declaration order");
            last = pos;
        }
    }
}
