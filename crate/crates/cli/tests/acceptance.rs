//! Acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use endodyn::abelian::{
    classify, fix_count, fixed_nef_witness, is_pcd_via_periods, pcd_nef_witness, torsion_fixed_count, EndoSpec,
    Entropy, FixCount, NefWitness,
};
use endodyn::conedyn::{descend, ConeEndo, ConeError, PolyCone};
use endodyn::corpus::{abelian_suite, descent_cases, lattice_grams, lattice_suite, perron_cases};
use endodyn::exactpoly::{char_poly_rational, largest_real_root, lehmer, salem_check, SalemVerdict};
use endodyn::hyperlattice::{
    entropy_class, finite_order_test, has_fixed_positive_cone_vector, order_by_powers, positive_entropy_witness,
    verify_isometry, DEFAULT_MAX_DEGREE,
};
use endodyn::linalg::{det_bareiss, det_rational, int_matrix, IntMatrix, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

const CORPUS_SEED: u64 = 2024;
const CORPUS_SIZE: usize = 240;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_endodyn"))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    check(start.elapsed() < limit, || format!("took {:.2?}, limit {limit:?}", start.elapsed()))
}

fn rat(v: &Value) -> BigRational {
    let s = v.as_str().expect("rational string");
    let (p, q) = s.split_once('/').expect("p/q");
    BigRational::new(p.parse().unwrap(), q.parse().unwrap())
}

fn lehmer_file(dir: &Path) -> std::path::PathBuf {
    let p = lehmer();
    let n = p.deg();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    if j == n - 1 {
                        (-p.coeff(i)).to_string()
                    } else if i == j + 1 {
                        "1".into()
                    } else {
                        "0".into()
                    }
                })
                .collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    let path = dir.join("lehmer.json");
    std::fs::write(&path, format!("{{\"kind\": \"abelian\", \"matrix\": [{}]}}\n", rows.join(",\n"))).unwrap();
    path
}

fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let file = lehmer_file(dir.path());
    let start = Instant::now();
    let out = bin().args(["classify-abelian", "--json", "-"]).arg(&file).output().unwrap();
    let elapsed = start.elapsed();
    check(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v["result"];
    check(r["pcd"] == true && r["amplified"] == false, || format!("pcd {} amplified {}", r["pcd"], r["amplified"]))?;
    check(r["degree"] == "1" && r["entropy"] == "positive", || {
        format!("degree {} entropy {}", r["degree"], r["entropy"])
    })?;
    let rad = &r["spectral_radius"]["matrix"];
    let (lo, hi) = (rat(&rad["lo"]), rat(&rad["hi"]));
    let width = &hi - &lo;
    check(width <= BigRational::new(1.into(), 100000.into()), || format!("width {width}"))?;
    // every point of the interval reads 1.17628 to five decimals
    let (floor, ceil) =
        (BigRational::new(1176275.into(), 1000000.into()), BigRational::new(1176285.into(), 1000000.into()));
    check(floor <= lo && hi < ceil, || format!("[{lo}, {hi}] does not round to 1.17628"))?;
    check(lehmer().sign_at(&lo) != lehmer().sign_at(&hi), || "interval does not bracket a root".into())?;
    check(salem_check(&lehmer()) == SalemVerdict::Salem, || "salem_check is not Salem".into())?;
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:.2?}"))?;
    Ok(format!("radius in [{:.7}, {:.7}], {elapsed:.2?}", lo.to_f64().unwrap(), hi.to_f64().unwrap()))
}

fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    Matrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| &a[(i, k)] * &b[(k, j)]).sum())
}

fn laplace_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][j] * laplace_det(&minor);
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Symmetric, nonzero, fixed by `M`, every principal minor `≥ 0`.
fn integral_nef_fixed(m: &IntMatrix, s: &IntMatrix) -> bool {
    let n = s.rows();
    let symmetric = (0..n).all(|i| (0..n).all(|j| s[(i, j)] == s[(j, i)]));
    let fixed = matmul(&matmul(&m.transpose(), s), m) == *s;
    let psd = (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<BigInt>> = idx.iter().map(|&i| idx.iter().map(|&j| s[(i, j)].clone()).collect()).collect();
        !laplace_det(&sub).is_negative()
    });
    symmetric && fixed && psd && s.entries().any(|x| !x.is_zero())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let corpus = abelian_suite(CORPUS_SEED, CORPUS_SIZE);
    let mut non_pcd = 0;
    for s in &corpus {
        check(s.n() <= 4 && s.matrix().entries().all(|x| x.abs() <= BigInt::from(3)), || "corpus bounds".into())?;
        let r = classify(s);
        if !r.pcd {
            non_pcd += 1;
        }
        match pcd_nef_witness(s) {
            Some(w) => check(!r.pcd && integral_nef_fixed(s.matrix(), &w), || {
                format!("bad integral witness for {:?}", s.matrix())
            })?,
            None => check(r.pcd, || format!("no integral witness for non-PCD {:?}", s.matrix()))?,
        }
        match fixed_nef_witness(s) {
            Ok(Some(w)) => {
                check(!r.amplified && w.verify(s.matrix()), || format!("bad fixed witness {:?}", s.matrix()))?
            }
            Ok(None) => check(r.amplified, || format!("no fixed witness, not amplified {:?}", s.matrix()))?,
            Err(e) => return Err(format!("{e} on {:?}", s.matrix())),
        }
        check(is_pcd_via_periods(s) == r.pcd, || format!("period test disagrees on {:?}", s.matrix()))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} specs, {non_pcd} non-PCD, 0 disagreements, {:.2?}", corpus.len(), start.elapsed()))
}

/// Fixed points of `M ⊗ I₂` on `(ℤ/N)⁴`.
fn enumerate_fixed(m: [[i64; 2]; 2], n: i64) -> u64 {
    let mut count = 0;
    for x in 0..n.pow(4) {
        let v = [x % n, x / n % n, x / n / n % n, x / n / n / n];
        // coordinates (a₀, a₁) real parts, (b₀, b₁) imaginary parts
        let ok = (0..2).all(|i| {
            let re = m[i][0] * v[0] + m[i][1] * v[1] - v[i];
            let im = m[i][0] * v[2] + m[i][1] * v[3] - v[2 + i];
            re.rem_euclid(n) == 0 && im.rem_euclid(n) == 0
        });
        if ok {
            count += 1;
        }
    }
    count
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let dm1 = (a - 1) * (d - 1) - b * c;
                    if dm1 == 0 || a * d - b * c == 0 {
                        continue;
                    }
                    let s = EndoSpec::from_rows(&[&[a, b], &[c, d]]).unwrap();
                    let Ok(FixCount::Finite(count)) = fix_count(&s, 1) else {
                        return Err(format!("no finite count for {a} {b} {c} {d}"));
                    };
                    let brute = enumerate_fixed([[a, b], [c, d]], dm1.abs());
                    let smith = torsion_fixed_count(&s, 1, &BigInt::from(dm1.abs())).unwrap();
                    check(count == BigInt::from(brute) && smith == count, || {
                        format!("[[{a},{b}],[{c},{d}]]: Lefschetz {count}, enumeration {brute}, Smith {smith}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} matrices with det M != 0 and det(M-I) != 0, 0 disagreements"))
}

fn criterion_4() -> Outcome {
    let corpus = abelian_suite(CORPUS_SEED, CORPUS_SIZE);
    let verdict = |s: &EndoSpec| {
        let r = classify(s);
        (r.amplified, r.pcd)
    };
    let base: Vec<_> = corpus.iter().map(verdict).collect();
    for (s, &v) in corpus.iter().zip(&base) {
        for k in 1..=6 {
            check(verdict(&s.power(k)) == v, || format!("power {k} changes {:?}", s.matrix()))?;
        }
        check(verdict(&s.dual()) == v, || format!("transpose changes {:?}", s.matrix()))?;
        check(verdict(&s.with_translation(true)) == v, || format!("translation changes {:?}", s.matrix()))?;
    }
    for (i, (s, t)) in corpus.iter().zip(corpus.iter().skip(1)).enumerate() {
        let (p, q) = (base[i], base[i + 1]);
        check(verdict(&s.product(t)) == (p.0 && q.0, p.1 && q.1), || format!("product rule fails at {i}"))?;
    }
    Ok(format!("{} specs x (powers 1..=6, transpose, translation), {} products", corpus.len(), corpus.len() - 1))
}

fn criterion_5() -> Outcome {
    let corpus = abelian_suite(CORPUS_SEED, CORPUS_SIZE);
    let (mut null, mut full_rank) = (0, 0);
    for s in &corpus {
        let r = classify(s);
        if r.entropy == Entropy::Null {
            null += 1;
            check(det_bareiss(s.matrix()).abs().is_one(), || {
                format!("null entropy with |det| != 1: {:?}", s.matrix())
            })?;
        }
        let rational = match fixed_nef_witness(s) {
            Ok(Some(NefWitness::Rational(w))) => Some(w),
            _ => None,
        };
        let integral_full = pcd_nef_witness(s).is_some_and(|w| !det_bareiss(&w).is_zero());
        let rational_full = rational.is_some_and(|w| !det_rational(&w).is_zero());
        if integral_full || rational_full {
            full_rank += 1;
            check(r.entropy == Entropy::Null, || {
                format!("full-rank fixed witness but positive entropy: {:?}", s.matrix())
            })?;
        }
    }
    Ok(format!("{null} null-entropy specs unimodular, {full_rank} full-rank fixed witnesses all null"))
}

fn criterion_6() -> Outcome {
    let cases = descent_cases(CORPUS_SEED, 20);
    for (i, c) in cases.iter().enumerate() {
        let t = descend(&c.endo, &c.big_class).map_err(|e| format!("case {i}: {e}"))?;
        check(t.steps.len() <= c.endo.dim(), || format!("case {i}: {} steps", t.steps.len()))?;
        let mut dim = c.endo.dim();
        for s in &t.steps {
            check(s.quotient.q.rows() + 1 == dim, || format!("case {i}: dimension did not drop by one"))?;
            dim -= 1;
        }
        for (k, s) in t.steps.iter().enumerate() {
            let q = &s.quotient.q;
            let pulled: Vec<BigRational> =
                (0..q.cols()).map(|j| (0..q.rows()).map(|r| &t.big_class_path[k + 1][r] * &q[(r, j)]).sum()).collect();
            check(pulled == t.big_class_path[k], || format!("case {i}: B path broken at step {k}"))?;
        }
        check(t.final_endo.amplified_test() && t.final_endo.dim() == dim, || {
            format!("case {i}: final system not amplified")
        })?;
    }
    let id = ConeEndo::new(Matrix::identity(3), PolyCone::orthant(3)).unwrap();
    let one = BigRational::one();
    let control = descend(&id, &[one, BigRational::zero(), BigRational::zero()]);
    check(matches!(control, Err(ConeError::HypothesisViolated { .. })), || {
        format!("identity control gave {control:?}")
    })?;
    let dims: Vec<usize> = cases.iter().map(|c| c.endo.dim()).collect();
    Ok(format!(
        "20 systems, dims {}..={}, identity control rejected",
        dims.iter().min().unwrap(),
        dims.iter().max().unwrap()
    ))
}

fn criterion_7() -> Outcome {
    let gram = lattice_grams().into_iter().find(|l| *l.gram() == int_matrix(&[&[1, 0], &[0, -2]])).unwrap();
    let pell = verify_isometry(&gram, int_matrix(&[&[3, 4], &[2, 3]])).map_err(|e| e.to_string())?;
    check(entropy_class(&pell).entropy == Entropy::Positive, || "Pell entropy is not positive".into())?;
    let w = positive_entropy_witness(&pell, DEFAULT_MAX_DEGREE).map_err(|e| e.to_string())?;
    w.verify(&pell).map_err(|e| e.to_string())?;
    let int = |n: i64| Some(BigRational::from_integer(n.into()));
    check(w.field.degree() == 2 && w.q12_rational() == int(8) && w.q_sum_rational() == int(16), || {
        format!("q12 {:?} q_sum {:?}", w.q12_rational(), w.q_sum_rational())
    })?;
    let corpus = lattice_suite(CORPUS_SEED, 50);
    let (mut positive, mut finite) = (0, 0);
    for iso in &corpus {
        check(iso.lattice().rank() <= 4, || "rank above 4".into())?;
        let r = entropy_class(iso);
        if r.entropy == Entropy::Positive {
            positive += 1;
        }
        check((r.entropy == Entropy::Positive) == !has_fixed_positive_cone_vector(iso), || {
            format!("entropy/fixed vector disagree on {:?}", iso.matrix())
        })?;
        if let Some(k) = order_by_powers(iso, 24) {
            finite += 1;
            check(finite_order_test(iso) == Some(k), || format!("order {k} missed on {:?}", iso.matrix()))?;
        }
    }
    Ok(format!("Pell q12 = 8, q(D1+D2) = 16; 50 isometries ({positive} positive, {finite} of finite order <= 24)"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0f64;
    let mut iters = 0;
    for (i, c) in perron_cases(CORPUS_SEED, 20).iter().enumerate() {
        let cert = c.endo.power_limit_ray(&c.start).map_err(|e| format!("case {i}: {e}"))?;
        let p = char_poly_rational(c.endo.matrix()).unwrap().to_int_poly();
        let root = largest_real_root(&p).ok_or_else(|| format!("case {i}: no real root"))?;
        let err = (cert.rate - root.to_f64()).abs();
        worst = worst.max(err);
        iters = iters.max(cert.iterations);
        check(err <= 1e-4 && cert.iterations <= 200, || {
            format!("case {i}: rate {} vs {}, {} iterations", cert.rate, root.to_f64(), cert.iterations)
        })?;
    }
    Ok(format!("20 cases, max |rate - root| = {worst:.1e}, max {iters} iterations"))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    for (kind, count) in [("abelian", "200"), ("lattice", "50"), ("cone", "20"), ("poly", "20")] {
        let st = bin()
            .args(["generate-corpus", kind, "--count", count, "--seed", "9", "--out"])
            .arg(&corpus)
            .output()
            .unwrap();
        check(st.status.success(), || format!("generate-corpus {kind} failed"))?;
    }
    lehmer_file(&corpus);
    std::fs::write(corpus.join("singular.json"), "{\"kind\": \"abelian\", \"matrix\": [[1, 2], [2, 4]]}\n").unwrap();
    let run = |parallel: &str| bin().args(["batch", "--parallel", parallel]).arg(&corpus).output().unwrap();
    let seq = run("1");
    let par = run("4");
    let again = run("4");
    check(seq.status.code() == Some(2), || format!("batch exit {:?}", seq.status.code()))?;
    check(seq.stdout == par.stdout && par.stdout == again.stdout, || "outputs differ".into())?;
    let lines = seq.stdout.iter().filter(|&&b| b == b'\n').count();
    Ok(format!("{lines} records byte-identical across sequential and --parallel 4 runs"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Lehmer reproduction", criterion_1),
        ("nef witness / eigenvalue equivalence", criterion_2),
        ("Lefschetz count oracle", criterion_3),
        ("invariance suite", criterion_4),
        ("null-entropy property", criterion_5),
        ("descent suite", criterion_6),
        ("hyperbolic lattice suite", criterion_7),
        ("Perron limit", criterion_8),
        ("determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why}) [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
