//! Parameter sweeps of `H¹` over `(α, λ, χ)`, run on a worker pool and
//! merged in a fixed order.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Parity, SuperAlgebra};
use crate::cohomology::{
    check_f_coupling, check_lemma_h_images, full_derivation_dims, h1, CohomologyError, LemmaViolation,
};
use crate::enveloping::{Character, HighestWeight, VermaModule};

pub const CSV_HEADER: &str = "p,alpha,lambda1,lambda2,lambda3,chif1,chif2,chif3,h1_even,h1_odd";

/// Stack for worker threads; module construction recurses.
const WORKER_STACK: usize = 16 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Graded,
    Full,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub p: u32,
    pub alphas: Vec<u32>,
    pub lambdas: Vec<[u32; 3]>,
    pub chis: Vec<[u32; 3]>,
    pub method: Method,
    /// Also run the coefficient lemma checks at every point.
    pub lemmas: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub p: u32,
    pub alpha: u32,
    pub lambda: [u32; 3],
    pub chi_f: [u32; 3],
    pub h1_even: usize,
    pub h1_odd: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lemma_violations: Vec<LemmaViolation>,
}

impl ScanRow {
    pub fn is_nonzero(&self) -> bool {
        self.h1_even + self.h1_odd > 0
    }
}

/// `α ∈ F_p` other than `0` and `-1`.
pub fn valid_alphas(p: u32) -> Vec<u32> {
    (1..p - 1).collect()
}

/// All of `F_p³`, lexicographic.
pub fn all_triples(p: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity((p * p * p) as usize);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// The integer representative used for `λ` in the four exceptional cases,
/// written with the `2p` offset, e.g. `(2p+2,2p-2,2p-2)`.
pub fn offset_alias(p: u32, lambda: [u32; 3]) -> Option<&'static str> {
    let r = |x: i64| x.rem_euclid(p as i64) as u32;
    [
        ([2, -2, -2], "(2p+2,2p-2,2p-2)"),
        ([2, -2, 0], "(2p+2,2p-2,2p)"),
        ([2, 0, -2], "(2p+2,2p,2p-2)"),
        ([3, -3, -3], "(2p+3,2p-3,2p-3)"),
    ]
    .into_iter()
    .find(|(l, _)| l.map(r) == lambda)
    .map(|(_, s)| s)
}

/// `H¹` at one point.
pub fn compute_point(
    alg: &SuperAlgebra,
    lambda: [u32; 3],
    chi_f: [u32; 3],
    method: Method,
    lemmas: bool,
) -> Result<ScanRow, CohomologyError> {
    let f = alg.field();
    let module = VermaModule::new(
        alg,
        HighestWeight::new(lambda.map(i64::from), f),
        Character::new(chi_f.map(i64::from), f),
    );
    let graded = match method {
        Method::Full => None,
        _ => Some(h1(&module)?.sdim()),
    };
    let full = match method {
        Method::Graded => None,
        _ => Some((
            full_derivation_dims(&module, Parity::Even)?.h1(),
            full_derivation_dims(&module, Parity::Odd)?.h1(),
        )),
    };
    if let (Some(g), Some(u)) = (graded, full) {
        if g != u {
            return Err(CohomologyError::OracleMismatch(format!(
                "α={} λ={lambda:?} χ={chi_f:?}: graded {g:?}, full {u:?}",
                alg.alpha()
            )));
        }
    }
    let (h1_even, h1_odd) = graded.or(full).unwrap();
    let mut lemma_violations = Vec::new();
    if lemmas {
        lemma_violations.extend(check_lemma_h_images(&module));
        lemma_violations.extend(check_f_coupling(&module));
    }
    Ok(ScanRow { p: alg.p(), alpha: alg.alpha(), lambda, chi_f, h1_even, h1_odd, lemma_violations })
}

/// Rows ordered by `(α, λ, χ)` lexicographically, independent of `jobs`.
pub fn run_scan(cfg: &ScanConfig, jobs: usize) -> Result<Vec<ScanRow>, CohomologyError> {
    let mut algebras = Vec::new();
    for &a in &cfg.alphas {
        algebras.push(
            SuperAlgebra::new(cfg.p as u64, a as i64)
                .map_err(|e| CohomologyError::BadParams(e.to_string()))?,
        );
    }
    let mut points = Vec::new();
    for (i, _) in cfg.alphas.iter().enumerate() {
        for &l in &cfg.lambdas {
            for &c in &cfg.chis {
                points.push((i, l, c));
            }
        }
    }
    points.sort_by_key(|&(i, l, c)| (cfg.alphas[i], l, c));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .stack_size(WORKER_STACK)
        .build()
        .expect("thread pool");
    pool.install(|| {
        points
            .par_iter()
            .map(|&(i, l, c)| compute_point(&algebras[i], l, c, cfg.method, cfg.lemmas))
            .collect()
    })
}

/// CSV body plus `#` comment lines: the offset aliases of exceptional
/// weights, then a count of nonzero rows.
pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let [l1, l2, l3] = r.lambda;
        let [c1, c2, c3] = r.chi_f;
        writeln!(s, "{},{},{l1},{l2},{l3},{c1},{c2},{c3},{},{}", r.p, r.alpha, r.h1_even, r.h1_odd).unwrap();
    }
    let mut aliases: Vec<([u32; 3], &str)> = rows
        .iter()
        .filter_map(|r| offset_alias(r.p, r.lambda).map(|a| (r.lambda, a)))
        .collect();
    aliases.sort();
    aliases.dedup();
    for (l, a) in aliases {
        writeln!(s, "# lambda {},{},{} = {a}", l[0], l[1], l[2]).unwrap();
    }
    let nonzero = rows.iter().filter(|r| r.is_nonzero()).count();
    writeln!(s, "# nonzero rows: {nonzero} of {}", rows.len()).unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration() {
        assert_eq!(valid_alphas(5), vec![1, 2, 3]);
        assert_eq!(all_triples(5).len(), 125);
        assert_eq!(all_triples(3)[1], [0, 0, 1]);
        assert_eq!(offset_alias(5, [2, 3, 3]), Some("(2p+2,2p-2,2p-2)"));
        assert_eq!(offset_alias(7, [3, 4, 4]), Some("(2p+3,2p-3,2p-3)"));
        assert_eq!(offset_alias(5, [0, 0, 0]), None);
    }

    #[test]
    fn small_scan_is_ordered_and_job_independent() {
        let cfg = ScanConfig {
            p: 5,
            alphas: vec![3, 2],
            lambdas: vec![[3, 2, 2], [2, 3, 3], [0, 1, 0]],
            chis: vec![[0, 0, 0]],
            method: Method::Graded,
            lemmas: false,
        };
        let a = run_scan(&cfg, 1).unwrap();
        let b = run_scan(&cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].alpha, 2);
        assert_eq!(a[0].lambda, [0, 1, 0]);
        assert_eq!((a[1].h1_even, a[1].h1_odd), (6, 0));
        let csv = to_csv(&a);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.contains("5,2,3,2,2,0,0,0,0,1\n"));
        assert!(csv.ends_with("# nonzero rows: 4 of 6\n"));
        assert!(csv.contains("# lambda 2,3,3 = (2p+2,2p-2,2p-2)\n"));
    }

    #[test]
    fn both_methods_agree() {
        let alg = SuperAlgebra::new(5, 2).unwrap();
        let row = compute_point(&alg, [3, 2, 2], [0, 0, 0], Method::Both, true).unwrap();
        assert_eq!((row.h1_even, row.h1_odd), (0, 1));
        assert!(row.lemma_violations.is_empty());
    }
}
