use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::commands::Options;
use crate::{run_file, Record};

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("could not start a pool of {0} threads: {1}")]
    Pool(usize, rayon::ThreadPoolBuildError),
}

/// `*.json` files directly under `dir`, sorted by file name.
pub fn problem_files(dir: &Path) -> Result<Vec<PathBuf>, BatchError> {
    let io = |source| BatchError::Io { path: dir.to_path_buf(), source };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Runs every problem file under `dir`; the records are in file order
/// whatever the thread count.
pub fn run_batch(dir: &Path, parallel: usize, opts: &Options) -> Result<Vec<Record>, BatchError> {
    let files = problem_files(dir)?;
    let one = |p: &PathBuf| {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned());
        run_file(p, None, opts, name)
    };
    if parallel <= 1 {
        return Ok(files.iter().map(one).collect());
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(parallel).build().map_err(|e| BatchError::Pool(parallel, e))?;
    Ok(pool.install(|| files.par_iter().map(one).collect()))
}

pub fn json_lines(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.json_line());
        s.push('\n');
    }
    s
}

pub fn summary(records: &[Record]) -> String {
    let w = records.iter().filter_map(|r| r.file.as_ref().map(String::len)).max().unwrap_or(4).max(4);
    let mut s = format!("{:<w$}  {:<16}  {:<6}  detail\n", "file", "command", "status");
    for r in records {
        let file = r.file.as_deref().unwrap_or("-");
        let (status, detail) = match &r.outcome {
            Ok(_) => ("ok", r.label()),
            Err(f) => ("error", format!("[{}] {}", f.code, f.message)),
        };
        let _ = writeln!(s, "{file:<w$}  {:<16}  {status:<6}  {detail}", r.command);
    }
    let mut counts = BTreeMap::new();
    for r in records {
        *counts.entry((r.command, r.label())).or_insert(0usize) += 1;
    }
    for ((command, label), n) in &counts {
        let _ = writeln!(s, "  {command:<16}  {label:<24}  {n}");
    }
    let failed = records.iter().filter(|r| r.outcome.is_err()).count();
    let _ = writeln!(s, "{} files, {} ok, {} failed", records.len(), records.len() - failed, failed);
    s
}
