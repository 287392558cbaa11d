//! Acceptance suite. One line per criterion; exits non-zero if any fails.
//!
//! Every comparison is exact (matrix, polynomial or invariant-list
//! equality). Each criterion also carries a wall-clock budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use qdrh_core::framed::{AlgebraElement, DifferentialForm, Framing};
use qdrh_core::homalg::{koszul_complex, AbGroupInvariants, Matrix};
use qdrh_core::qarith::{
    cyclotomic_p, q_binomial, q_factorial, q_integer, zq_ring, Integers, LaurentPoly,
    LaurentPolyRing, QAlgebra, QPolynomial, Rationals, Ring, SeriesRing, Zq,
};
use qdrh_core::qconn::{qconn_de_rham, qconn_report, QConnectionModule};
use qdrh_core::qderham::{
    build_exact, build_q_de_rham, cartier_boundary_check, cartier_check,
    compare_framings_invariants, eta_koszul_check, framing_chain_map_search, gm_h1,
    koszul_vs_qderham, p1_cohomology, taylor_comparison,
};
use qdrh_core::semilinear::tate_twist_action;
use qdrh_core::{CoeffRingSpec, ExperimentReport, TruncationParams, Verdict};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verified(r: &ExperimentReport) -> Result<(), String> {
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    ensure(r.verdict == Verdict::Verified, || {
        format!(
            "{} {}: {:?}, failed {:?}",
            r.experiment, r.params, r.verdict, failed
        )
    })
}

// ---------------------------------------------------------------- oracles

fn int_binomial(n: u64, k: u64) -> BigInt {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_else(BigInt::zero)
}

/// Coefficients of the Gaussian binomial by counting `k`-subsets of
/// `{0, ..., n-1}` by their sum: the coefficient of `q^j` is the number of
/// subsets with sum `j + k(k-1)/2`.
fn gaussian_by_subsets(n: usize, k: usize) -> Vec<BigInt> {
    let max = n * n;
    // ways[c][s]: subsets of the elements seen so far with c elements and sum s.
    let mut ways = vec![vec![BigInt::zero(); max + 1]; k + 1];
    ways[0][0] = BigInt::one();
    for x in 0..n {
        for c in (1..=k).rev() {
            for s in (x..=max).rev() {
                let add = ways[c - 1][s - x].clone();
                ways[c][s] += add;
            }
        }
    }
    let base = k * k.saturating_sub(1) / 2;
    let mut out: Vec<BigInt> = ways[k][base..].to_vec();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn ones(n: usize) -> Vec<BigInt> {
    vec![BigInt::one(); n]
}

fn q_poly_int(coeffs: Vec<BigInt>) -> QPolynomial<Integers> {
    QPolynomial::new(Integers, coeffs)
}

/// `[n]_q` in `Z[q^{±1}]`: `1 + ... + q^{n-1}`, or `-(q^n + ... + q^{-1})`.
fn zq_q_int(n: i64) -> Zq {
    if n >= 0 {
        LaurentPoly::new(Integers, 0, ones(n as usize))
    } else {
        LaurentPoly::new(
            Integers,
            n,
            vec![BigInt::from(-1); n.unsigned_abs() as usize],
        )
    }
}

/// Arithmetic in `(Z/p^M)[t]/t^N` with `t = q - 1`, independent of the
/// library.
struct Trunc {
    modulus: i128,
    n: usize,
}

impl Trunc {
    fn red(&self, x: i128) -> i128 {
        x.rem_euclid(self.modulus)
    }

    fn binom(n: i128, k: u32) -> i128 {
        // Generalized binomial coefficient for integer n.
        let mut num = 1i128;
        let mut den = 1i128;
        for i in 0..k as i128 {
            num *= n - i;
            den *= i + 1;
        }
        num / den
    }

    fn mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; self.n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(self.n - i) {
                out[i + j] = self.red(out[i + j] + x * y);
            }
        }
        out
    }

    /// `[k]_q = (q^k - 1)/t`, read off the expansion of `q^k` one degree up.
    fn q_int(&self, k: i64) -> Vec<i128> {
        (0..self.n)
            .map(|j| self.red(Self::binom(k as i128, j as u32 + 1)))
            .collect()
    }

    fn inv_int(&self, a: i128) -> i128 {
        (1..self.modulus)
            .find(|x| self.red(a * x) == 1)
            .expect("unit")
    }

    fn strings(&self, v: &[i128]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }
}

fn valuation(mut x: i128, p: i128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// Elementary divisors over `Z/p^M` as valuations, by full pivoting on the
/// entry of smallest valuation.
fn zmod_snf_valuations(mut a: Vec<Vec<i128>>, p: i128, m: u32) -> Vec<u32> {
    let modulus = p.pow(m);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let red = |x: i128| x.rem_euclid(modulus);
    let inv = |u: i128| (1..modulus).find(|x| red(u * x) == 1).expect("unit");
    let mut out = Vec::new();
    let mut r0 = 0;
    while r0 < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in r0..rows {
            for j in r0..cols {
                let v = valuation(a[i][j], p, m);
                if v < m && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(r0, pi);
        for row in a.iter_mut() {
            row.swap(r0, pj);
        }
        let unit = red(a[r0][r0] / p.pow(v));
        let ui = inv(unit);
        for i in r0 + 1..rows {
            let f = red((a[i][r0] / p.pow(v)) * ui);
            if f != 0 {
                for j in r0..cols {
                    a[i][j] = red(a[i][j] - f * a[r0][j]);
                }
            }
        }
        for j in r0 + 1..cols {
            let f = red((a[r0][j] / p.pow(v)) * ui);
            if f != 0 {
                for i in r0..rows {
                    a[i][j] = red(a[i][j] - f * a[i][r0]);
                }
            }
        }
        out.push(v);
        r0 += 1;
    }
    out.extend(std::iter::repeat_n(m, rows - out.len()));
    out
}

/// Invariants of `S ⊕ ⊕_{k ∈ [-w, w] \ 0} S/[k]_q S` over `Z/p^M`.
fn gm_oracle(p: u64, m: u32, n: usize, w: i64) -> AbGroupInvariants {
    let tr = Trunc {
        modulus: (p as i128).pow(m),
        n,
    };
    let mut free = n;
    let mut torsion: Vec<u32> = Vec::new();
    for k in (-w..=w).filter(|&k| k != 0) {
        let f = tr.q_int(k);
        let mat: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| if i >= j { f[i - j] } else { 0 }).collect())
            .collect();
        for v in zmod_snf_valuations(mat, p as i128, m) {
            if v >= m {
                free += 1;
            } else if v > 0 {
                torsion.push(v);
            }
        }
    }
    torsion.sort();
    AbGroupInvariants {
        free_rank: free,
        divisors: torsion
            .iter()
            .map(|&v| (p as u128).pow(v).to_string())
            .collect(),
    }
}

/// `Σ_{k=1}^{K} (n log q)^k / k!` over `Q` to precision `prec` in `t`,
/// with `log q = Σ (-1)^{j+1} t^j / j`.
fn exp_series_minus_one(n: i64, prec: usize) -> Vec<BigRational> {
    let zero = BigRational::zero();
    let mul = |a: &[BigRational], b: &[BigRational]| {
        let mut out = vec![zero.clone(); prec];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(prec - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut log = vec![zero.clone(); prec];
    for (j, c) in log.iter_mut().enumerate().skip(1) {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        *c = BigRational::new(BigInt::from(sign * n), BigInt::from(j as i64));
    }
    let mut term = vec![zero.clone(); prec];
    term[0] = BigRational::one();
    let mut acc = vec![zero.clone(); prec];
    for k in 1..prec {
        term = mul(&term, &log);
        let scale = BigRational::new(BigInt::one(), BigInt::from(k as i64));
        term.iter_mut().for_each(|c| *c = &*c * &scale);
        for (a, b) in acc.iter_mut().zip(&term) {
            *a += b;
        }
    }
    acc
}

// ---------------------------------------------------------------- criteria

fn c1_q_combinatorics() -> Outcome {
    let mut count = 0;
    for n in 0..=20u64 {
        let qn = q_integer(Integers, n);
        ensure(qn.coeffs() == ones(n as usize).as_slice(), || {
            format!("[{n}]_q")
        })?;
        ensure(qn.eval_at_one() == BigInt::from(n), || format!("[{n}]_1"))?;
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        ensure(q_factorial(Integers, n).eval_at_one() == fact, || {
            format!("[{n}]!_1")
        })?;
        for k in 0..=n {
            let b = q_binomial(n, k).map_err(|e| e.to_string())?;
            ensure(
                b.coeffs() == gaussian_by_subsets(n as usize, k as usize).as_slice(),
                || format!("binom({n},{k})_q against subset sums"),
            )?;
            ensure(b.eval_at_one() == int_binomial(n, k), || {
                format!("binom({n},{k}) at q = 1")
            })?;
            if n >= 1 && k >= 1 && k < n {
                let a = q_binomial(n - 1, k - 1).map_err(|e| e.to_string())?;
                let c = q_binomial(n - 1, k).map_err(|e| e.to_string())?;
                let qk = QPolynomial::monomial(Integers, BigInt::one(), k as usize);
                ensure(b == a.add(&qk.mul(&c)), || format!("q-Pascal at ({n},{k})"))?;
            }
            count += 1;
        }
    }
    for m in 1..=20u64 {
        for n in 1..=20u64 {
            let lhs = q_integer(Integers, m * n);
            let rhs = q_integer(Integers, m).mul(
                &q_integer(Integers, n)
                    .substitute_q_power(m as i64)
                    .map_err(|e| e.to_string())?,
            );
            ensure(lhs == rhs, || format!("[{m}·{n}]_q"))?;
            ensure(lhs == q_poly_int(ones((m * n) as usize)), || {
                format!("[{m}·{n}]_q coefficients")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} identities"))
}

fn random_zq(rng: &mut ChaCha8Rng) -> Zq {
    let len = rng.gen_range(1..=3);
    LaurentPoly::new(
        Integers,
        rng.gen_range(-2..=2),
        (0..len)
            .map(|_| BigInt::from(rng.gen_range(-4..=4)))
            .collect(),
    )
}

fn random_element(
    f: &Framing,
    rng: &mut ChaCha8Rng,
    lo: i64,
) -> AlgebraElement<LaurentPolyRing<Integers>> {
    let z = zq_ring();
    let terms: Vec<(Vec<i64>, Zq)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (
                (0..f.d()).map(|_| rng.gen_range(lo..=6)).collect(),
                random_zq(rng),
            )
        })
        .collect();
    AlgebraElement::from_terms(f, &z, terms).expect("valid exponents")
}

fn c2_jackson() -> Outcome {
    let z = zq_ring();
    let kinds = [
        (Framing::polynomial(1), 0i64),
        (Framing::shifted(&[1]), 0),
        (Framing::laurent(1), -50),
    ];
    for (f, lo) in &kinds {
        let t = AlgebraElement::coordinate(f, &z, 0);
        for n in *lo..=50i64 {
            let (tn, tn1) = if n >= 0 {
                (
                    t.pow(n as u32),
                    if n >= 1 {
                        t.pow(n as u32 - 1)
                    } else {
                        AlgebraElement::zero(f, &z)
                    },
                )
            } else {
                let m = |e: i64| AlgebraElement::monomial(f, &z, vec![e], z.one()).unwrap();
                (m(n), m(n - 1))
            };
            ensure(tn.nabla(0) == tn1.scale(&zq_q_int(n)), || {
                format!("∇ T^{n} on {f:?}")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pairs = 0;
    for (f, lo) in &kinds {
        let lo = (*lo).max(-6);
        for _ in 0..200 {
            let a = random_element(f, &mut rng, lo);
            let b = random_element(f, &mut rng, lo);
            let lhs = a.mul(&b).nabla(0);
            let rhs = a.gamma(0).mul(&b.nabla(0)).add(&a.nabla(0).mul(&b));
            ensure(lhs == rhs, || format!("q-Leibniz on {f:?}"))?;
            pairs += 1;
        }
    }
    // The closed-form ∇ against the difference quotient (γf - f)/((q-1)T).
    let s = SeriesRing::new(Rationals, 8).map_err(|e| e.to_string())?;
    for (f, _) in &kinds {
        for n in 0..=12i64 {
            let e = AlgebraElement::coordinate(f, &s, 0).pow(n as u32);
            ensure(
                e.nabla(0) == e.nabla_quotient(0).map_err(|e| e.to_string())?,
                || format!("quotient route n = {n}"),
            )?;
        }
    }
    for d in 1..=3usize {
        for f in [
            Framing::polynomial(d),
            Framing::laurent(d),
            Framing::shifted(&vec![1; d]),
        ] {
            let m = build_exact(&f, 3).map_err(|e| e.to_string())?;
            for i in 0..d.saturating_sub(1) {
                let dd = m
                    .complex
                    .diff(i as i64 + 1)
                    .mul(&z, &m.complex.diff(i as i64));
                ensure(dd.is_zero(&z), || format!("d∘d ≠ 0 in degree {i} on {f:?}"))?;
            }
            for _ in 0..10 {
                let g = random_element(&f, &mut rng, if f.is_laurent() { -3 } else { 0 });
                let form = DifferentialForm::function(&g);
                ensure(form.d_q().d_q().is_zero(), || {
                    format!("d_q d_q f ≠ 0 on {f:?}")
                })?;
                if d >= 2 {
                    let w = DifferentialForm::term(&g, vec![0]).map_err(|e| e.to_string())?;
                    ensure(w.d_q().d_q().is_zero(), || {
                        format!("d_q d_q ω ≠ 0 on {f:?}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "∇T^n for |n| ≤ 50, {pairs} Leibniz pairs, d_q² = 0 for d ≤ 3"
    ))
}

fn c3_gm() -> Outcome {
    let w = 8;
    let mut runs = 0;
    for p in [2u64, 3, 5] {
        for m in 1..=3u32 {
            for n in 1..=6usize {
                let t = TruncationParams::new(p, m, n, 2, 1).map_err(|e| e.to_string())?;
                let r = gm_h1(&t, w).map_err(|e| e.to_string())?;
                let expected = gm_oracle(p, m, n, w);
                ensure(r.degrees[1].invariants == expected, || {
                    format!(
                        "p={p} M={m} N={n}: {:?} vs oracle {:?}",
                        r.degrees[1].invariants, expected
                    )
                })?;
                verified(&r)?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (p, M, N) triples at W = {w}"))
}

fn c4_cartier() -> Outcome {
    for p in [2u64, 3] {
        let w = 3 * p as i64;
        let n = 2 * (p as usize - 1);
        let t = TruncationParams::new(p, 2, n.max(2), 2, 1).map_err(|e| e.to_string())?;
        let r = cartier_check(1, &t, w).map_err(|e| e.to_string())?;
        verified(&r)?;
        // Integral exponents in [-w, w] carry a copy of Z/p^2[ζ_p] each.
        let integral = (-w..=w).filter(|e| e % p as i64 == 0).count();
        let expected = AbGroupInvariants::free(integral * (p as usize - 1));
        for i in 0..2 {
            ensure(r.degrees[i].invariants == expected, || {
                format!("p={p} H^{i}: {:?}", r.degrees[i].invariants)
            })?;
        }
        // ∇_q(T^{pk}) = [pk]_q T^{pk-1} and Φ_p(q) | [pk]_q over Z.
        let phi = cyclotomic_p(Integers, p).map_err(|e| e.to_string())?;
        for k in 1..=(w / p as i64) {
            let (_, rem) = q_integer(Integers, (p as i64 * k) as u64)
                .div_rem(&phi)
                .map_err(|e| e.to_string())?;
            ensure(rem.is_zero(), || format!("Φ_{p} ∤ [{}]_q", p as i64 * k))?;
        }
        let b = cartier_boundary_check(1, &t, w, 100, 1).map_err(|e| e.to_string())?;
        verified(&b)?;
        ensure(
            b.check("boundary_leibniz").is_some_and(|c| c.passed),
            || "Leibniz rule for the boundary".into(),
        )?;
    }
    Ok("p ∈ {2, 3}, M = 2, window 3p, 100 boundary samples".into())
}

fn c5_koszul() -> Outcome {
    let t = TruncationParams::new(3, 2, 3, 2, 1).map_err(|e| e.to_string())?;
    let s = t.series();
    for d in 1..=2usize {
        let w = 2;
        let r = koszul_vs_qderham(d, &t, w).map_err(|e| e.to_string())?;
        verified(&r)?;
        // Independent Koszul complex: γ_j acts on T^n by q^{n_j}, so its
        // differential is (q-1) times the dlog-normalized q-de Rham one.
        let model = build_q_de_rham(&Framing::laurent(d), w, &s).map_err(|e| e.to_string())?;
        let basis = &model.bases[0];
        let ops: Vec<Matrix<SeriesRing<_>>> = (0..d)
            .map(|j| {
                let diag: Vec<_> = basis.iter().map(|b| s.q_pow(b.exp[j])).collect();
                Matrix::diagonal(&s, diag.len(), diag.len(), &diag)
            })
            .collect();
        let k = koszul_complex(&s, &ops).map_err(|e| e.to_string())?;
        for i in 0..d as i64 {
            let lhs = k.diff(i);
            let rhs = model.complex.diff(i).scale(&s, &s.t());
            ensure(lhs == rhs, || {
                format!("d = {d}: Koszul differential ≠ (q-1)·∇ in degree {i}")
            })?;
        }
    }
    Ok("d ∈ {1, 2}, p = 3, M = 2, N = 3".into())
}

fn c6_eta() -> Outcome {
    for p in [2u64, 3] {
        for d in 1..=2usize {
            let t = TruncationParams::new(p, 1, 3, 2, 1).map_err(|e| e.to_string())?;
            let w = if d == 1 { 3 } else { 2 };
            let r = eta_koszul_check(d, &t, w).map_err(|e| e.to_string())?;
            verified(&r)?;
        }
    }
    Ok("p ∈ {2, 3}, d ∈ {1, 2}".into())
}

fn c7_taylor() -> Outcome {
    let n = 8;
    for f in [Framing::polynomial(1), Framing::laurent(1)] {
        let r = taylor_comparison(&f, n, 6, CoeffRingSpec::Rat).map_err(|e| e.to_string())?;
        verified(&r)?;
    }
    // Σ_k (m log q)^k / k! = q^m - 1 to order t^N.
    for m in -6..=6i64 {
        let lhs = exp_series_minus_one(m, n + 1);
        for (j, c) in lhs.iter().enumerate() {
            let expected = if j == 0 {
                BigRational::zero()
            } else {
                let num = Trunc::binom(m as i128, j as u32);
                BigRational::from_integer(BigInt::from(num))
            };
            ensure(*c == expected, || {
                format!("exp(m log q) - 1 at m = {m}, t^{j}")
            })?;
        }
    }
    Ok(format!("N = {n}, degree ≤ 6"))
}

fn c8_p1() -> Outcome {
    for p in [2u64, 3] {
        let t = TruncationParams::new(p, 2, 3, 6, 1).map_err(|e| e.to_string())?;
        let a_list: Vec<i64> = [2i64, 3]
            .into_iter()
            .filter(|a| p % *a as u64 != 0)
            .collect();
        let r = p1_cohomology(&t, &a_list).map_err(|e| e.to_string())?;
        verified(&r)?;
        let free = AbGroupInvariants::free(3);
        ensure(r.degrees[0].invariants == free, || "H^0".into())?;
        ensure(r.degrees[1].invariants.is_zero(), || "H^1".into())?;
        ensure(r.degrees[2].invariants == free, || "H^2".into())?;
        let tr = Trunc {
            modulus: (p as i128).pow(2),
            n: 3,
        };
        let detail = |name: &str| -> Value {
            r.check(name)
                .and_then(|c| c.detail.clone())
                .map(|d| d["multiplier"].clone())
                .unwrap_or(Value::Null)
        };
        let phi = tr.strings(&tr.q_int(p as i64));
        ensure(
            detail("frobenius_on_generator_matches_tate_twist") == serde_json::json!(phi),
            || "φ_p on H^2".into(),
        )?;
        for a in a_list {
            let inv = tr.inv_int(a as i128);
            let g: Vec<i128> = tr.q_int(a).iter().map(|c| tr.red(c * inv)).collect();
            ensure(
                detail(&format!("gamma_{a}_on_generator_matches_tate_twist"))
                    == serde_json::json!(tr.strings(&g)),
                || format!("γ_{a} on H^2"),
            )?;
        }
    }
    Ok("p ∈ {2, 3}, M = 2, N = 3, window 6".into())
}

fn c9_framings() -> Outcome {
    let f1 = Framing::polynomial(1);
    let f2 = Framing::shifted(&[1]);
    let mut findings = Vec::new();
    for p in [2u64, 3, 5] {
        for m in 1..=2u32 {
            for n in 1..=3usize {
                let t = TruncationParams::new(p, m, n, 9, 2).map_err(|e| e.to_string())?;
                let r = compare_framings_invariants(&f1, &f2, &t).map_err(|e| e.to_string())?;
                if r.verdict != Verdict::Verified {
                    findings.push(format!("p={p} M={m} N={n}: {:?}", r.verdict));
                }
            }
            let t = TruncationParams::new(p, m, 2, 9, 2).map_err(|e| e.to_string())?;
            let r = framing_chain_map_search(&f1, &f2, &t).map_err(|e| e.to_string())?;
            verified(&r)?;
            ensure(r.witness.is_some(), || format!("no witness at p={p} M={m}"))?;
        }
    }
    ensure(findings.is_empty(), || {
        format!("invariants differ: {findings:?}")
    })?;
    Ok("shift 0 vs 1: invariants agree; witnesses ≡ id mod (q-1) at N = 2".into())
}

fn c10_qconn() -> Outcome {
    let t = TruncationParams::new(3, 2, 3, 2, 1).map_err(|e| e.to_string())?;
    let r = qconn_report(&t, 1, 2, 500, 2024).map_err(|e| e.to_string())?;
    verified(&r)?;
    let s = t.series();
    for f in [
        Framing::laurent(2),
        Framing::polynomial(2),
        Framing::shifted(&[1, 0]),
    ] {
        let unit = QConnectionModule::unit(&f, &s);
        let ours = qconn_de_rham(&unit, 2).map_err(|e| e.to_string())?;
        let model = build_q_de_rham(&f, 2, &s).map_err(|e| e.to_string())?;
        ensure(ours.complex.diffs() == model.complex.diffs(), || {
            format!("unit object on {f:?}")
        })?;
    }
    let tr = Trunc { modulus: 9, n: 3 };
    for a in [2i64, 4, 5] {
        let one = tate_twist_action(-1, 3, a, &s).map_err(|e| e.to_string())?;
        let sq = one.tensor(&one).map_err(|e| e.to_string())?;
        let inv = tr.inv_int(a as i128);
        let g: Vec<i128> = tr.q_int(a).iter().map(|c| tr.red(c * inv)).collect();
        let g2 = tr.mul(&g, &g);
        let p2 = tr.mul(&tr.q_int(3), &tr.q_int(3));
        ensure(
            s.elem_json(&sq.gamma) == serde_json::json!(tr.strings(&g2)),
            || format!("γ_{a} on {{-2}}"),
        )?;
        let phi = sq.phi.as_ref().map(|x| s.elem_json(x));
        ensure(phi == Some(serde_json::json!(tr.strings(&p2))), || {
            "φ_3 on {-2}".into()
        })?;
    }
    Ok("500 balancing triples, unit object for d = 2, Tate squares".into())
}

fn c11_determinism() -> Outcome {
    let runs = || -> Result<Vec<String>, String> {
        let t = TruncationParams::new(3, 2, 4, 9, 2).map_err(|e| e.to_string())?;
        let reports = [
            cartier_boundary_check(1, &t, 6, 40, 17).map_err(|e| e.to_string())?,
            qconn_report(&TruncationParams::new(5, 1, 2, 2, 1).unwrap(), 1, 2, 50, 99)
                .map_err(|e| e.to_string())?,
            framing_chain_map_search(
                &Framing::polynomial(1),
                &Framing::shifted(&[1]),
                &t.with_window(6),
            )
            .map_err(|e| e.to_string())?,
            gm_h1(&t, 8).map_err(|e| e.to_string())?,
            p1_cohomology(&t.with_window(6), &[2]).map_err(|e| e.to_string())?,
        ];
        Ok(reports
            .iter()
            .map(|r| serde_json::to_string(&r.to_json()).unwrap())
            .collect())
    };
    let a = runs()?;
    let b = runs()?;
    ensure(a == b, || "reports differ between identical runs".into())?;
    Ok(format!("{} reports byte-identical", a.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 11] = [
        (
            "q-combinatorics",
            c1_q_combinatorics,
            Duration::from_secs(1),
        ),
        ("Jackson calculus", c2_jackson, Duration::from_secs(5)),
        ("G_m torsion", c3_gm, Duration::from_secs(60)),
        ("Cartier modulo Φ_p", c4_cartier, Duration::from_secs(120)),
        ("Koszul comparison", c5_koszul, Duration::from_secs(120)),
        ("η identification", c6_eta, Duration::from_secs(300)),
        ("Taylor expansion", c7_taylor, Duration::from_secs(30)),
        ("projective line", c8_p1, Duration::from_secs(120)),
        (
            "two framings of Z[x]",
            c9_framings,
            Duration::from_secs(600),
        ),
        ("q-connections", c10_qconn, Duration::from_secs(60)),
        ("determinism", c11_determinism, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *budget => {
                Err(format!("over budget ({:.2?} > {:.0?})", elapsed, budget))
            }
            o => o,
        };
        match outcome {
            Ok(msg) => println!(
                "PASS {:>2} {name}: {msg} [{:.2?}, budget {:.0?}]",
                k + 1,
                elapsed,
                budget
            ),
            Err(msg) => {
                failures += 1;
                println!(
                    "FAIL {:>2} {name}: {msg} [{:.2?}, budget {:.0?}]",
                    k + 1,
                    elapsed,
                    budget
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
