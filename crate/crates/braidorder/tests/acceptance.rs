//! Acceptance gate: one test per acceptance criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them all).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use braidorder::cli::run_verify;
use braidorder::{
    aij_images, b3_stabilize, certify_all, certify_biorder, complete_with_axis_conjugates,
    extract_conjugacy_form, fox_derivative, fox_eval0, lcs_depth, leading_tensor,
    magnus_expansion, permutation_completion, pure_braid_generator, translation_maps_check,
    BraidWord, Gen, MagnusError, OrderContext, Permutation, Verdict, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion<F: FnOnce()>(number: u32, name: &str, body: F) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("PASS criterion {number}: {name}"),
        Err(e) => {
            println!("FAIL criterion {number}: {name}");
            resume_unwind(e);
        }
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_braidorder"))
}

fn braid(n: u32, s: &str) -> BraidWord {
    BraidWord::parse(n, s).unwrap()
}

fn random_braid(rng: &mut ChaCha8Rng, strands: u32, max_gen: u32, len: usize) -> BraidWord {
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

fn random_word(rng: &mut ChaCha8Rng, rank: u32, maxlen: usize) -> Word {
    let len = rng.gen_range(0..=maxlen);
    Word::from_runs((0..len).map(|_| {
        let g = rng.gen_range(1..=rank);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        (Gen::new(g), e)
    }))
}

fn magic_context() -> OrderContext {
    let form = extract_conjugacy_form(&braid(3, "s1^2 s2^-1").artin_action()).unwrap();
    OrderContext::new(&form, Gen::new(1), 8).unwrap()
}

/// Deterministic sample of braids whose certificate is a full bi-order
/// pass, with their order contexts at the given cap.
fn sample_bi_contexts(count: usize, cap: usize) -> Vec<(BraidWord, OrderContext)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB10D);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(3..=5u32);
        let len = rng.gen_range(1..=6usize);
        let beta = random_braid(&mut rng, n, n - 1, len);
        let form = extract_conjugacy_form(&beta.artin_action()).unwrap();
        if let Ok(cert) = certify_all(&form) {
            if cert.verdict == Verdict::BiOrderPreserving {
                let ctx = OrderContext::new(&form, cert.i0, cap).unwrap();
                out.push((beta, ctx));
            }
        }
    }
    out
}

#[test]
fn criterion_01_magic_braid_certificate() {
    criterion(1, "magic braid certifies BI with orbit {2,3}, h_O = 1, in under a second", || {
        let start = Instant::now();
        let output = bin().args(["--json", "certify", "3", "s1^2 s2^-1"]).output().unwrap();
        let elapsed = start.elapsed();
        assert!(output.status.success(), "exit: {:?}", output.status);
        let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        assert_eq!(v["i0"], 1);
        assert_eq!(v["verdict"], "BI_ORDER_PRESERVING");
        let orbits = v["orbits"].as_array().unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0]["orbit"], serde_json::json!([2, 3]));
        assert_eq!(orbits[0]["h_O"], 1);
        assert_eq!(orbits[0]["gcd"], 1);
        assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    });
}

#[test]
fn criterion_02_twist_family_certifies() {
    criterion(2, "s1^2 s2^n certifies BI for every n in [-6, 6]", || {
        let start = Instant::now();
        for n in -6i64..=6 {
            let beta = braid(3, "s1^2").compose(&braid(3, "s2").power(n)).unwrap();
            let form = extract_conjugacy_form(&beta.artin_action()).unwrap();
            let cert = certify_all(&form).unwrap();
            assert_eq!(
                cert.verdict,
                Verdict::BiOrderPreserving,
                "failed at n = {n}: {}",
                cert.to_json()
            );
        }
        assert!(start.elapsed().as_secs_f64() < 5.0);
    });
}

#[test]
fn criterion_03_axis_conjugate_closed_forms() {
    criterion(3, "closed-form A_{i,j} images match the Artin action for all i < j <= n <= 7", || {
        for n in 2u32..=7 {
            for j in 2..=n {
                for i in 1..j {
                    let closed = aij_images(i, j, n).unwrap();
                    let acted = pure_braid_generator(i, j, n).unwrap().artin_action();
                    assert_eq!(closed, acted, "mismatch at i={i}, j={j}, n={n}");
                }
            }
        }
    });
}

#[test]
fn criterion_04_axis_conjugate_increment_rule() {
    criterion(4, "multiplying by A_{i,n} adds 1 to h_c exactly when i lies in c", || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [4u32, 5, 6] {
            for _ in 0..100 {
                let len = rng.gen_range(0..=10usize);
                let beta = random_braid(&mut rng, n, n - 2, len);
                let form = extract_conjugacy_form(&beta.artin_action()).unwrap();
                let base = certify_biorder(&form, Gen::new(n)).unwrap();
                for i in 1..n {
                    let a = pure_braid_generator(i, n, n).unwrap();
                    let product = beta.compose(&a).unwrap();
                    let pform = extract_conjugacy_form(&product.artin_action()).unwrap();
                    let after = certify_biorder(&pform, Gen::new(n)).unwrap();
                    assert_eq!(base.reports.len(), after.reports.len());
                    for (before, now) in base.reports.iter().zip(&after.reports) {
                        assert_eq!(before.orbit, now.orbit, "A_{{i,n}} is pure");
                        let bump = i64::from(before.orbit.contains(&i));
                        assert_eq!(
                            now.h_o,
                            before.h_o + bump,
                            "cycle {:?}, i = {i}, n = {n}",
                            before.orbit
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_05_axis_completion_pipeline() {
    criterion(5, "axis completion always certifies BI; the worked alpha = A_{4,5} A_{2,5} too", || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(3..=6u32);
            let len = rng.gen_range(0..=10usize);
            let beta = random_braid(&mut rng, n, n - 2, len);
            let result = complete_with_axis_conjugates(&beta).unwrap();
            assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
            assert_eq!(result.product, beta.compose(&result.alpha).unwrap());
        }
        let beta = braid(5, "s1 s3");
        let alpha = pure_braid_generator(4, 5, 5)
            .unwrap()
            .compose(&pure_braid_generator(2, 5, 5).unwrap())
            .unwrap();
        let product = beta.compose(&alpha).unwrap();
        let form = extract_conjugacy_form(&product.artin_action()).unwrap();
        let cert = certify_biorder(&form, Gen::new(5)).unwrap();
        assert_eq!(cert.verdict, Verdict::BiOrderPreserving);
    });
}

#[test]
fn criterion_06_three_strand_stabilization() {
    criterion(6, "b3_stabilize finds k <= 3 with a passing certificate on random 3-braids", || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let len = rng.gen_range(0..=10usize);
            let beta = random_braid(&mut rng, 3, 2, len);
            let (k, result) = b3_stabilize(&beta).unwrap();
            assert!(k <= 3);
            assert_eq!(result.certificate.verdict, Verdict::BiOrderPreserving);
            assert_eq!(result.product, beta.compose(&result.alpha).unwrap());
        }
    });
}

fn all_permutations(n: u32) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<u32>, remaining: &mut Vec<u32>, out: &mut Vec<Permutation>) {
        if remaining.is_empty() {
            out.push(Permutation::from_images(prefix.clone()).unwrap());
            return;
        }
        for idx in 0..remaining.len() {
            let v = remaining.remove(idx);
            prefix.push(v);
            go(prefix, remaining, out);
            prefix.pop();
            remaining.insert(idx, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

#[test]
fn criterion_07_permutation_completion_cycle_type() {
    criterion(7, "permutation completion yields cycle type (1, n-1) with fixed point <= n-2", || {
        for n in [4u32, 5] {
            let mut seen = 0;
            for sigma in all_permutations(n) {
                if sigma.apply(n) == n {
                    continue;
                }
                seen += 1;
                let pc = permutation_completion(&sigma).unwrap();
                assert_eq!(pc.tau.apply(n), n);
                let product = sigma.compose(&pc.tau);
                assert!(pc.c1_fixed_point <= n - 2);
                assert_eq!(product.apply(pc.c1_fixed_point), pc.c1_fixed_point);
                let mut sizes: Vec<usize> = product.orbits().iter().map(Vec::len).collect();
                sizes.sort_unstable();
                assert_eq!(sizes, vec![1, (n - 1) as usize]);
                assert!(pc.c2.contains(&n));
            }
            let total: u32 = (1..=n).product();
            let fixing: u32 = (1..n).product();
            assert_eq!(seen, total - fixing);
        }
    });
}

/// Independent full-precision Magnus oracle: truncated series over i128
/// built by divide-and-conquer multiplication of letter series, with the
/// inverse letter given by the alternating geometric series rather than a
/// binomial closed form.
mod oracle {
    use std::collections::BTreeMap;

    pub type Series = BTreeMap<Vec<u32>, i128>;

    pub fn one() -> Series {
        BTreeMap::from([(Vec::new(), 1)])
    }

    pub fn mul(a: &Series, b: &Series, cap: usize) -> Series {
        let mut out = Series::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if ma.len() + mb.len() > cap {
                    continue;
                }
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                *out.entry(m).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn letter(id: u32, sign: i64, cap: usize) -> Series {
        let mut s = Series::new();
        if sign > 0 {
            s.insert(Vec::new(), 1);
            if cap >= 1 {
                s.insert(vec![id], 1);
            }
        } else {
            // (1 + X)^-1 = 1 - X + X^2 - ...
            for m in 0..=cap {
                s.insert(vec![id; m], if m % 2 == 0 { 1 } else { -1 });
            }
        }
        s
    }

    pub fn expand(letters: &[(u32, i64)], cap: usize) -> Series {
        match letters.len() {
            0 => one(),
            1 => letter(letters[0].0, letters[0].1, cap),
            n => {
                let (lo, hi) = letters.split_at(n / 2);
                mul(&expand(lo, cap), &expand(hi, cap), cap)
            }
        }
    }
}

fn oracle_expansion(w: &Word, cap: usize) -> oracle::Series {
    let letters: Vec<(u32, i64)> = w.letters().map(|(g, s)| (g.index(), s)).collect();
    oracle::expand(&letters, cap)
}

fn assert_matches_oracle(w: &Word, cap: usize) {
    let ours: BTreeMap<Vec<u32>, i128> =
        magnus_expansion(w, cap).terms().map(|(m, c)| (m.to_vec(), i128::from(c))).collect();
    assert_eq!(ours, oracle_expansion(w, cap), "expansion of {w} at cap {cap}");
}

/// Left-normed commutator [[..[x1, x2], ..], xw] of weight w.
fn nested_commutator(weight: u32) -> Word {
    let mut c = Word::generator(Gen::new(1));
    for k in 2..=weight {
        let xk = Word::generator(Gen::new(k));
        c = c.mul(&xk).mul(&c.inverse()).mul(&xk.inverse());
    }
    c
}

#[test]
fn criterion_08_fox_magnus_suite() {
    criterion(8, "Fox product rule, eval-at-1, Magnus multiplicativity and depths vs oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // Product rule on 500 random pairs.
        for _ in 0..500 {
            let u = random_word(&mut rng, 3, 8);
            let v = random_word(&mut rng, 3, 8);
            for j in 1..=3u32 {
                let j = Gen::new(j);
                let lhs = fox_derivative(&u.mul(&v), j);
                let rhs = fox_derivative(&u, j).add(&fox_derivative(&v, j).left_mul_word(&u));
                assert_eq!(lhs, rhs, "product rule at u = {u}, v = {v}");
            }
        }
        // Fox derivative evaluated at 1 is the exponent sum.
        for _ in 0..200 {
            let w = random_word(&mut rng, 4, 10);
            for j in 1..=4u32 {
                let j = Gen::new(j);
                assert_eq!(fox_eval0(&w, j), w.exponent_sum(j));
            }
        }
        // Multiplicativity at caps up to 6, and agreement with the oracle.
        for cap in [1usize, 2, 3, 6] {
            for _ in 0..60 {
                let u = random_word(&mut rng, 3, 6);
                let v = random_word(&mut rng, 3, 6);
                assert_matches_oracle(&u, cap);
                let product = magnus_expansion(&u, cap).mul(&magnus_expansion(&v, cap));
                assert_eq!(
                    magnus_expansion(&u.mul(&v), cap).terms().collect::<Vec<_>>(),
                    product.terms().collect::<Vec<_>>()
                );
            }
        }
        // Commutator depths, exact, against the oracle's minimal degree.
        for weight in 1u32..=5 {
            let c = nested_commutator(weight);
            assert_eq!(lcs_depth(&c, 6).unwrap(), weight as usize);
            let series = oracle_expansion(&c, 6);
            let min_degree =
                series.keys().filter(|m| !m.is_empty()).map(Vec::len).min().unwrap();
            assert_eq!(min_degree, weight as usize);
        }
        assert_eq!(lcs_depth(&Word::parse("x1 x2 x1^-1 x2^-1").unwrap(), 4).unwrap(), 2);
    });
}

#[test]
fn criterion_09_leading_tensor_equivariance() {
    criterion(9, "leading tensor of phi(w) is the abelianized substitution of the tensor of w", || {
        let phi = braid(3, "s1^2 s2^-1").artin_action();
        // Abelianized action: x1 -> x1, x2 -> x3, x3 -> x2.
        let image_of = |id: u32| -> Vec<(u32, i64)> {
            match id {
                1 => vec![(1, 1)],
                2 => vec![(3, 1)],
                3 => vec![(2, 1)],
                _ => unreachable!(),
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut accepted = 0;
        while accepted < 200 {
            let w = match rng.gen_range(0..3u32) {
                0 => random_word(&mut rng, 3, 8),
                1 => {
                    let u = random_word(&mut rng, 3, 4);
                    let v = random_word(&mut rng, 3, 4);
                    u.mul(&v).mul(&u.inverse()).mul(&v.inverse())
                }
                _ => {
                    let u = random_word(&mut rng, 3, 3);
                    let v = random_word(&mut rng, 3, 3);
                    let z = random_word(&mut rng, 3, 3);
                    let c = u.mul(&v).mul(&u.inverse()).mul(&v.inverse());
                    c.mul(&z).mul(&c.inverse()).mul(&z.inverse())
                }
            };
            if w.is_identity() {
                continue;
            }
            let depth = match lcs_depth(&w, 3) {
                Ok(d) => d,
                Err(MagnusError::DepthExceedsCap { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            accepted += 1;
            let tensor = leading_tensor(&w, 3).unwrap();
            assert_eq!(tensor.degree(), depth);
            let substituted = tensor.substitute_linear(image_of);
            let image_tensor = leading_tensor(&phi.apply(&w), 3).unwrap();
            assert_eq!(image_tensor.degree(), depth, "depth preserved at w = {w}");
            assert_eq!(image_tensor.coords(), &substituted, "tensors at w = {w}");
        }
    });
}

#[test]
fn criterion_10_end_to_end_ordering_verification() {
    criterion(10, "verify: 0 violations over 500 samples on the magic and 10 random BI contexts", || {
        let start = Instant::now();
        let mut contexts = vec![(braid(3, "s1^2 s2^-1"), magic_context())];
        contexts.extend(sample_bi_contexts(10, 8));
        for (beta, ctx) in &contexts {
            let report = run_verify(ctx, 500, 12, 42).unwrap();
            assert_eq!(report.violations(), 0, "violations for {beta}: {report:?}");
            assert_eq!(report.unresolved, 0, "unresolved abstentions for {beta}");
            // Under 1% abstentions across the ~8 comparisons per sample.
            assert!(
                report.abstentions * 100 < u64::from(report.samples) * 8,
                "abstention rate for {beta}: {}",
                report.abstentions
            );
        }
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    });
}

#[test]
fn criterion_11_negative_control() {
    criterion(11, "sigma_1 in B_3 is INCONCLUSIVE with exit code 3, never claimed BI", || {
        let output = bin().args(["certify", "3", "s1"]).output().unwrap();
        assert_eq!(output.status.code(), Some(3));
        let stdout = String::from_utf8(output.stdout).unwrap();
        assert!(stdout.contains("INCONCLUSIVE"), "{stdout}");
        assert!(!stdout.contains("BI_ORDER_PRESERVING"), "{stdout}");
    });
}

#[test]
fn criterion_12_translation_maps() {
    criterion(12, "translation maps hold with zero mismatches over t in [-20, 20]", || {
        let mut contexts = vec![magic_context()];
        contexts.extend(sample_bi_contexts(10, 8).into_iter().map(|(_, ctx)| ctx));
        // A pure-braid context exercises the singleton-orbit formulas.
        let pure = braid(4, "s1^2 s3^-2");
        let form = extract_conjugacy_form(&pure.artin_action()).unwrap();
        contexts.push(OrderContext::new(&form, Gen::new(4), 8).unwrap());
        for ctx in &contexts {
            let report = translation_maps_check(ctx, 20).unwrap();
            assert!(report.is_clean(), "mismatches: {:?}", report.mismatches);
            assert_eq!(report.checks, ctx.orbits().len() * 41 * 5);
        }
    });
}

/// The sampled comparisons and certificates above are deterministic; a
/// second run must reproduce them bit for bit.
#[test]
fn acceptance_inputs_are_deterministic() {
    let a = sample_bi_contexts(3, 8);
    let b = sample_bi_contexts(3, 8);
    let left: Vec<String> = a.iter().map(|(w, _)| w.to_string()).collect();
    let right: Vec<String> = b.iter().map(|(w, _)| w.to_string()).collect();
    assert_eq!(left, right);
    for ((_, ca), (_, cb)) in a.iter().zip(&b) {
        let x = Word::parse("x1 x2").unwrap();
        let y = Word::parse("x2 x1").unwrap();
        assert_eq!(
            braidorder::compare_in_F(&x, &y, ca).ok(),
            braidorder::compare_in_F(&x, &y, cb).ok()
        );
    }
}

/// compare_in_F agrees with the twist-family certificates: the ordering it
/// builds is invariant under each certified action (spot check distinct
/// from the randomized run above).
#[test]
fn ordering_is_invariant_under_certified_twists() {
    for n in [-3i64, -1, 0, 2, 5] {
        let beta = braid(3, "s1^2").compose(&braid(3, "s2").power(n)).unwrap();
        let form = extract_conjugacy_form(&beta.artin_action()).unwrap();
        let cert = certify_all(&form).unwrap();
        assert_eq!(cert.verdict, Verdict::BiOrderPreserving);
        let ctx = OrderContext::new(&form, cert.i0, 8).unwrap();
        let phi = ctx.endomorphism().clone();
        let words = [
            Word::parse("x2").unwrap(),
            Word::parse("x3").unwrap(),
            Word::parse("x2 x3^-1 x1").unwrap(),
            Word::parse("x1^2 x3").unwrap(),
            Word::parse("x3 x2").unwrap(),
        ];
        for a in &words {
            for b in &words {
                let plain = braidorder::compare_in_F(a, b, &ctx).unwrap();
                let moved =
                    braidorder::compare_in_F(&phi.apply(a), &phi.apply(b), &ctx).unwrap();
                assert_eq!(plain, moved, "n = {n}, a = {a}, b = {b}");
                assert_eq!(plain == Ordering::Equal, a == b);
            }
        }
    }
}
