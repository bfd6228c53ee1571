use std::fmt::Write as _;

use endodyn::abelian::{
    amplified_certificate, classify, fix_count, fixed_nef_witness, pcd_nef_witness, torsion_fixed_count,
    torsion_fixed_count_brute, AbelianError, EndoSpec, Entropy, FixCount, NefWitness,
};
use endodyn::conedyn::{descend, ConeEndo, ConeError, PolyCone};
use endodyn::exactpoly::{
    cyclotomic_divisors, irreducibility_certificate, largest_real_root, root_location_summary, salem_check, IntPoly,
    Irreducibility, PolyError, SalemVerdict,
};
use endodyn::hyperlattice::{
    entropy_class, finite_order_test, null_fixed_witness, positive_entropy_witness, to_f64_vector, verify_isometry,
    LatticeError, QuadLattice,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::problem::{Kind, Problem};
use crate::wire;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ClassifyAbelian,
    FixCount,
    TorsionOracle,
    ClassifyLattice,
    DescendCone,
    PolyAnalyze,
    SalemCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ClassifyAbelian => "classify-abelian",
            Command::FixCount => "fix-count",
            Command::TorsionOracle => "torsion-oracle",
            Command::ClassifyLattice => "classify-lattice",
            Command::DescendCone => "descend-cone",
            Command::PolyAnalyze => "poly-analyze",
            Command::SalemCheck => "salem-check",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Command::ClassifyAbelian | Command::FixCount | Command::TorsionOracle => Kind::Abelian,
            Command::ClassifyLattice => Kind::Lattice,
            Command::DescendCone => Kind::Cone,
            Command::PolyAnalyze | Command::SalemCheck => Kind::Poly,
        }
    }

    /// Command run on a problem of `kind` in batch mode.
    pub fn default_for(kind: Kind) -> Command {
        match kind {
            Kind::Abelian => Command::ClassifyAbelian,
            Kind::Lattice => Command::ClassifyLattice,
            Kind::Cone => Command::DescendCone,
            Kind::Poly => Command::PolyAnalyze,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub period: u64,
    pub level: Option<u64>,
    pub max_degree: usize,
    pub verbose: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { period: 1, level: None, max_degree: endodyn::hyperlattice::DEFAULT_MAX_DEGREE, verbose: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Exact counterexample data, when the failure carries any.
    pub detail: Value,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code, kind, message: message.into(), detail: Value::Null }
    }

    pub fn to_value(&self) -> Value {
        json!({ "code": self.code, "kind": self.kind, "message": self.message, "detail": self.detail })
    }
}

impl From<AbelianError> for Failure {
    fn from(e: AbelianError) -> Self {
        let (code, kind) = match e {
            AbelianError::SearchFailed => (EXIT_INCOMPLETE, "search_failed"),
            _ => (EXIT_INVALID, "invalid_input"),
        };
        Failure::new(code, kind, e.to_string())
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        let (code, kind) = match e {
            LatticeError::FieldTooLarge { .. } => (EXIT_INCOMPLETE, "field_too_large"),
            LatticeError::NoneInPositiveCone | LatticeError::CertificateFailed(_) => (EXIT_INCOMPLETE, "search_failed"),
            LatticeError::WrongEntropy(_) => (EXIT_HYPOTHESIS, "hypothesis_violated"),
            _ => (EXIT_INVALID, "invalid_input"),
        };
        Failure::new(code, kind, e.to_string())
    }
}

impl From<ConeError> for Failure {
    fn from(e: ConeError) -> Self {
        let mut f = match &e {
            ConeError::HypothesisViolated { .. } | ConeError::NoContractibleRay => {
                Failure::new(EXIT_HYPOTHESIS, "hypothesis_violated", e.to_string())
            }
            ConeError::NoConvergence(_) => Failure::new(EXIT_INCOMPLETE, "search_failed", e.to_string()),
            _ => Failure::new(EXIT_INVALID, "invalid_input", e.to_string()),
        };
        if let ConeError::HypothesisViolated { power, witness, value } = &e {
            f.detail =
                json!({ "power": power, "fixed_class": wire::rat_vec(witness), "big_class_value": wire::rat(value) });
        }
        f
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::new(EXIT_INVALID, "invalid_input", e.to_string())
    }
}

/// Result record plus a human-readable table.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub table: Vec<(String, String)>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome { result, table: Vec::new() }
    }

    fn row(&mut self, key: &str, value: impl ToString) {
        self.table.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let w = self.table.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut s = String::new();
        for (k, v) in &self.table {
            let _ = writeln!(s, "{k:<w$}  {v}");
        }
        s
    }
}

pub fn run(cmd: Command, problem: &Problem, opts: &Options) -> Result<Outcome, Failure> {
    if problem.kind() != cmd.kind() {
        return Err(Failure::new(
            EXIT_INVALID,
            "invalid_input",
            format!("{} expects a {} problem, found {}", cmd.name(), cmd.kind().name(), problem.kind().name()),
        ));
    }
    match (cmd, problem) {
        (Command::ClassifyAbelian, Problem::Abelian { matrix, translation }) => {
            classify_abelian(&EndoSpec::new(matrix.clone(), *translation)?, opts)
        }
        (Command::FixCount, Problem::Abelian { matrix, translation }) => {
            fix_count_cmd(&EndoSpec::new(matrix.clone(), *translation)?, opts)
        }
        (Command::TorsionOracle, Problem::Abelian { matrix, translation }) => {
            torsion_oracle(&EndoSpec::new(matrix.clone(), *translation)?, opts)
        }
        (Command::ClassifyLattice, Problem::Lattice { gram, matrix }) => classify_lattice(gram, matrix, opts),
        (Command::DescendCone, Problem::Cone { generators, matrix, big_class, start }) => {
            descend_cone(generators, matrix, big_class.as_deref(), start.as_deref(), opts)
        }
        (Command::PolyAnalyze, Problem::Poly { coefficients }) => poly_analyze(coefficients),
        (Command::SalemCheck, Problem::Poly { coefficients }) => salem_cmd(coefficients),
        _ => unreachable!("kind checked above"),
    }
}

fn nef_witness_value(w: &NefWitness) -> Value {
    match w {
        NefWitness::Rational(s) => json!({ "type": "rational", "matrix": wire::rat_matrix(s) }),
        NefWitness::Algebraic(a) => json!({
            "type": "algebraic",
            "field": wire::field(&a.field),
            "rows": Value::Array(a.rows.iter().map(|r| wire::field_vec(&a.field, r)).collect()),
            "matrix": Value::Array(a.entries.iter().map(|r| wire::field_vec(&a.field, r)).collect()),
        }),
    }
}

fn classify_abelian(spec: &EndoSpec, opts: &Options) -> Result<Outcome, Failure> {
    let r = classify(spec);
    let integral = pcd_nef_witness(spec);
    let fixed = fixed_nef_witness(spec)?;
    let certificate = if r.amplified { amplified_certificate(spec) } else { None };
    let mut o = Outcome::new(json!({
        "n": r.n,
        "char_poly": wire::poly(&r.char_poly),
        "degree": wire::int(&r.degree),
        "amplified": r.amplified,
        "pcd": r.pcd,
        "dense_orbit": r.dense_orbit,
        "entropy": r.entropy.to_string(),
        "translation": spec.has_translation(),
        "spectral_radius": {
            "n1": wire::algebraic(r.spectral_radius.n1.root()),
            "matrix": r.spectral_radius.matrix.as_ref().map(|m| wire::algebraic(m.root())),
        },
        "witnesses": {
            "integral_fixed_nef": integral.as_ref().map(wire::int_matrix),
            "fixed_nef": fixed.as_ref().map(nef_witness_value),
            "amplified_separator": certificate.as_ref().map(|c| json!({
                "fixed_space_dim": c.fixed_space.len(),
                "separator": c.separator.as_ref().map(wire::rat_matrix),
            })),
        },
    }));
    o.row("n", r.n);
    o.row("char poly", &r.char_poly);
    o.row("degree", &r.degree);
    o.row("amplified", r.amplified);
    o.row("pcd", r.pcd);
    o.row("dense orbit", r.dense_orbit);
    o.row("entropy", r.entropy);
    o.row("radius on N1", format!("{:.6}", r.spectral_radius.n1.to_f64()));
    if let Some(m) = &r.spectral_radius.matrix {
        o.row("radius of M", format!("{:.6}", m.to_f64()));
    }
    let describe = match &fixed {
        None => "none (amplified)".to_string(),
        Some(NefWitness::Rational(_)) => "rational PSD matrix".to_string(),
        Some(NefWitness::Algebraic(a)) => format!("algebraic PSD matrix over a degree {} field", a.field.degree()),
    };
    o.row("fixed nef witness", describe);
    o.row("integral witness", if integral.is_some() { "present" } else { "none" });
    if opts.verbose {
        if let Some(w) = &integral {
            o.row("integral S", format!("{w:?}"));
        }
    }
    Ok(o)
}

fn fix_count_cmd(spec: &EndoSpec, opts: &Options) -> Result<Outcome, Failure> {
    let c = fix_count(spec, opts.period)?;
    let value = match &c {
        FixCount::Finite(n) => wire::int(n),
        FixCount::Infinite => Value::String("infinite".into()),
    };
    let mut o = Outcome::new(json!({ "period": opts.period, "fixed_points": value }));
    o.row("period", opts.period);
    o.row(
        "fixed points",
        match c {
            FixCount::Finite(n) => n.to_string(),
            FixCount::Infinite => "infinite".into(),
        },
    );
    Ok(o)
}

fn torsion_oracle(spec: &EndoSpec, opts: &Options) -> Result<Outcome, Failure> {
    let level =
        opts.level.ok_or_else(|| Failure::new(EXIT_INVALID, "invalid_input", "torsion-oracle needs --level N"))?;
    let smith = torsion_fixed_count(spec, opts.period, &BigInt::from(level))?;
    let brute = torsion_fixed_count_brute(spec, opts.period, level)?;
    let agree = brute.map(|b| BigInt::from(b) == smith);
    let mut o = Outcome::new(json!({
        "period": opts.period,
        "level": level,
        "smith": wire::int(&smith),
        "enumeration": brute.map(|b| wire::int(&BigInt::from(b))),
        "agree": agree,
    }));
    o.row("period", opts.period);
    o.row("level", level);
    o.row("Smith form count", &smith);
    o.row("enumeration", brute.map_or("skipped (group too large)".into(), |b| b.to_string()));
    if agree == Some(false) {
        return Err(Failure::new(
            EXIT_INCOMPLETE,
            "oracle_disagreement",
            format!("Smith {smith} vs enumeration {}", brute.unwrap()),
        ));
    }
    Ok(o)
}

fn classify_lattice(
    gram: &endodyn::linalg::IntMatrix,
    matrix: &endodyn::linalg::IntMatrix,
    opts: &Options,
) -> Result<Outcome, Failure> {
    let lattice = QuadLattice::new(gram.clone())?;
    let iso = verify_isometry(&lattice, matrix.clone())?;
    let r = entropy_class(&iso);
    let order = finite_order_test(&iso);
    let witness = match r.entropy {
        Entropy::Positive => {
            let w = positive_entropy_witness(&iso, opts.max_degree)?;
            let k = &w.field;
            json!({
                "type": "positive",
                "field": wire::field(k),
                "leading": wire::field_elem(k, &w.leading),
                "power": w.power,
                "d1": wire::field_vec(k, &w.d1),
                "d2": wire::field_vec(k, &w.d2),
                "d1_approx": Value::Array(to_f64_vector(k, &w.d1).into_iter().map(wire::dyadic).collect()),
                "d2_approx": Value::Array(to_f64_vector(k, &w.d2).into_iter().map(wire::dyadic).collect()),
                "q12": wire::field_elem(k, &w.q12),
                "q_sum": wire::field_elem(k, &w.q_sum),
                "direction": wire::field_vec(k, &w.direction),
            })
        }
        Entropy::Null => {
            let w = null_fixed_witness(&iso)?;
            json!({ "type": "null", "power": w.power, "vector": wire::int_vec(&w.vector), "q_value": wire::int(&w.q_value) })
        }
    };
    let salem = r.salem.map(salem_name);
    let mut o = Outcome::new(json!({
        "rank": lattice.rank(),
        "reference": wire::int_vec(lattice.reference()),
        "char_poly": wire::poly(&iso.char_poly()),
        "entropy": r.entropy.to_string(),
        "spectral_radius": wire::algebraic(r.spectral_radius.root()),
        "salem": salem,
        "finite_order": order,
        "witness": witness,
    }));
    o.row("rank", lattice.rank());
    o.row("char poly", iso.char_poly());
    o.row("entropy", r.entropy);
    o.row("spectral radius", format!("{:.6}", r.spectral_radius.to_f64()));
    if let Some(s) = salem {
        o.row("salem factor", s);
    }
    o.row("finite order", order.map_or("none".into(), |k| k.to_string()));
    o.row("witness", witness["type"].as_str().unwrap_or_default());
    if opts.verbose {
        o.row("witness data", wire::canonical(&witness));
    }
    Ok(o)
}

fn descend_cone(
    generators: &[Vec<num_rational::BigRational>],
    matrix: &endodyn::linalg::RatMatrix,
    big_class: Option<&[num_rational::BigRational]>,
    start: Option<&[num_rational::BigRational]>,
    opts: &Options,
) -> Result<Outcome, Failure> {
    let dim = generators.first().map_or(matrix.rows(), |g| g.len());
    let cone = PolyCone::new(dim, generators.to_vec())?;
    let endo = ConeEndo::new(matrix.clone(), cone)?;
    let b = big_class.ok_or_else(|| Failure::new(EXIT_INVALID, "invalid_input", "descend-cone needs `big_class`"))?;
    let perron = match start {
        None => Value::Null,
        Some(x) => {
            let c = endo.power_limit_ray(x)?;
            json!({
                "limit": Value::Array(c.limit.iter().map(|&v| wire::dyadic(v)).collect()),
                "rate": wire::dyadic(c.rate),
                "residual_bound": endodyn::approx::dyadic_upper(c.residual, wire::DYADIC_BITS).map(|r| wire::rat(&r)),
                "iterations": c.iterations,
            })
        }
    };
    let t = descend(&endo, b)?;
    assert!(t.verify(), "descent trace failed its own invariants");
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "power": s.power,
                "fixed_class": wire::rat_vec(&s.fixed_class),
                "ray": wire::int_vec(&s.ray),
                "quotient": wire::rat_matrix(&s.quotient.q),
                "section": wire::rat_matrix(&s.quotient.s),
                "induced": wire::rat_matrix(&s.induced),
                "guard_lifts": s.guard_lifts,
                "guard_holds": s.guard_holds,
            })
        })
        .collect();
    let mut o = Outcome::new(json!({
        "initial_dim": t.initial_dim,
        "contractions": t.steps.len(),
        "total_power": t.total_power(),
        "steps": steps,
        "big_class_path": Value::Array(t.big_class_path.iter().map(|b| wire::rat_vec(b)).collect()),
        "final_matrix": wire::rat_matrix(t.final_endo.matrix()),
        "final_generators": Value::Array(t.final_endo.cone().generators().iter().map(|g| wire::rat_vec(g)).collect()),
        "final_amplified": t.final_amplified,
        "perron": perron,
    }));
    o.row("initial dim", t.initial_dim);
    o.row("contractions", t.steps.len());
    o.row("total power", t.total_power());
    o.row("final dim", t.final_endo.dim());
    o.row("final amplified", t.final_amplified);
    if let Some(r) = perron.get("rate").and_then(Value::as_str) {
        o.row("perron rate", r);
    }
    if opts.verbose {
        for (i, s) in t.steps.iter().enumerate() {
            o.row(&format!("step {i} ray"), format!("{:?}", s.ray.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
        }
    }
    Ok(o)
}

fn salem_name(v: SalemVerdict) -> &'static str {
    match v {
        SalemVerdict::Salem => "salem",
        SalemVerdict::NotSalem => "not_salem",
        SalemVerdict::SalemConfigurationOnly => "salem_configuration_only",
    }
}

fn nonzero(p: &IntPoly) -> Result<(), Failure> {
    if p.is_zero() {
        return Err(Failure::new(EXIT_INVALID, "invalid_input", "the zero polynomial"));
    }
    Ok(())
}

fn poly_analyze(p: &IntPoly) -> Result<Outcome, Failure> {
    nonzero(p)?;
    let s = root_location_summary(p)?;
    let top = largest_real_root(p);
    let cyc: Vec<u64> = s.cyclotomic_divisors.iter().copied().collect();
    let mut o = Outcome::new(json!({
        "degree": s.degree,
        "distinct_unit_circle_roots": s.distinct_unit_circle_roots,
        "distinct_real_roots_gt_one": s.distinct_real_roots_gt_one,
        "cyclotomic_divisors": cyc,
        "is_reciprocal": s.is_reciprocal,
        "largest_real_root": top.as_ref().map(wire::algebraic),
    }));
    o.row("polynomial", p);
    o.row("degree", s.degree);
    o.row("unit circle roots", s.distinct_unit_circle_roots);
    o.row("real roots > 1", s.distinct_real_roots_gt_one);
    o.row("cyclotomic divisors", format!("{cyc:?}"));
    o.row("reciprocal", s.is_reciprocal);
    if let Some(t) = &top {
        o.row("largest real root", format!("{:.6}", t.to_f64()));
    }
    Ok(o)
}

fn salem_cmd(p: &IntPoly) -> Result<Outcome, Failure> {
    nonzero(p)?;
    let verdict = salem_check(p);
    let irr = match irreducibility_certificate(p) {
        Irreducibility::Certified { primes } => json!({ "type": "certified", "primes": primes }),
        Irreducibility::Reducible => json!({ "type": "reducible" }),
        Irreducibility::Uncertified => json!({ "type": "uncertified" }),
    };
    let cyc: Vec<u64> = cyclotomic_divisors(p).into_iter().collect();
    let mut o =
        Outcome::new(json!({ "verdict": salem_name(verdict), "irreducibility": irr, "cyclotomic_divisors": cyc }));
    o.row("polynomial", p);
    o.row("verdict", salem_name(verdict));
    o.row("irreducibility", irr["type"].as_str().unwrap_or_default());
    Ok(o)
}
