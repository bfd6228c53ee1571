use std::path::{Path, PathBuf};

use endodyn::corpus::{abelian_with_dims, descent_cases, lattice_grams, lattice_suite, reflection_products};
use endodyn::hyperlattice::QuadLattice;
use endodyn::linalg::IntMatrix;

use crate::problem::{Kind, Problem};

pub const MAX_BOUND: i64 = 9;
pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: Kind,
    pub count: usize,
    pub seed: u64,
    pub dim: Option<usize>,
    pub bound: i64,
    pub gram: Option<IntMatrix>,
}

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn invalid(msg: impl Into<String>) -> GenerateError {
    GenerateError::Invalid(msg.into())
}

pub fn generate(spec: &CorpusSpec) -> Result<Vec<Problem>, GenerateError> {
    if !(1..=MAX_BOUND).contains(&spec.bound) {
        return Err(invalid(format!("--bound must be in 1..={MAX_BOUND}")));
    }
    if spec.dim.is_some_and(|d| !(1..=MAX_DIM).contains(&d)) {
        return Err(invalid(format!("--dim must be in 1..={MAX_DIM}")));
    }
    if spec.gram.is_some() && spec.kind != Kind::Lattice {
        return Err(invalid("--gram only applies to lattice corpora"));
    }
    let (lo, hi) = spec.dim.map_or((1, 4), |d| (d, d));
    Ok(match spec.kind {
        Kind::Abelian => abelian_with_dims(spec.seed, spec.count, lo, hi, spec.bound)
            .into_iter()
            .map(|e| Problem::Abelian { matrix: e.matrix().clone(), translation: false })
            .collect(),
        Kind::Poly => abelian_with_dims(spec.seed, spec.count, lo, hi, spec.bound)
            .into_iter()
            .map(|e| Problem::Poly { coefficients: e.char_poly() })
            .collect(),
        Kind::Lattice => {
            let isos = match (&spec.gram, spec.dim) {
                (Some(g), _) => {
                    let l = QuadLattice::new(g.clone()).map_err(|e| invalid(format!("--gram: {e}")))?;
                    if endodyn::corpus::integral_roots(&l).is_empty() {
                        return Err(invalid("--gram: no integral reflections with entries in [-2, 2]"));
                    }
                    reflection_products(spec.seed, spec.count, &l)
                }
                (None, None) => lattice_suite(spec.seed, spec.count),
                (None, Some(d)) => {
                    let grams: Vec<_> = lattice_grams().into_iter().filter(|l| l.rank() == d).collect();
                    if grams.is_empty() {
                        return Err(invalid(format!("no built-in Gram matrix of rank {d}; pass --gram")));
                    }
                    (0..spec.count)
                        .map(|i| {
                            reflection_products(spec.seed.wrapping_add(i as u64), 1, &grams[i % grams.len()])
                                .pop()
                                .expect("one isometry")
                        })
                        .collect()
                }
            };
            isos.into_iter()
                .map(|g| Problem::Lattice { gram: g.lattice().gram().clone(), matrix: g.matrix().clone() })
                .collect()
        }
        Kind::Cone => {
            if spec.dim.is_some_and(|d| !(2..=5).contains(&d)) {
                return Err(invalid("cone corpora have dimension 2..=5"));
            }
            let mut out = Vec::with_capacity(spec.count);
            let mut batch = 0u64;
            while out.len() < spec.count {
                let cases = descent_cases(spec.seed.wrapping_add(batch), spec.count.max(4));
                batch += 1;
                for c in cases {
                    if out.len() == spec.count || spec.dim.is_some_and(|d| d != c.endo.dim()) {
                        continue;
                    }
                    out.push(Problem::Cone {
                        generators: c.endo.cone().generators().to_vec(),
                        matrix: c.endo.matrix().clone(),
                        big_class: Some(c.big_class),
                        start: None,
                    });
                }
            }
            out
        }
    })
}

pub fn file_name(kind: Kind, i: usize) -> String {
    format!("{}-{i:04}.json", kind.name())
}

/// Writes each problem as canonical JSON; returns the paths written.
pub fn write_corpus(spec: &CorpusSpec, out: &Path) -> Result<Vec<PathBuf>, GenerateError> {
    let problems = generate(spec)?;
    std::fs::create_dir_all(out).map_err(|source| GenerateError::Io { path: out.to_path_buf(), source })?;
    problems
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let path = out.join(file_name(spec.kind, i));
            std::fs::write(&path, p.canonical() + "\n")
                .map_err(|source| GenerateError::Io { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}
