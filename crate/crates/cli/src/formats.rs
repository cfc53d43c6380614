//! CSV layouts shared by `solve`, `bench` and `deblur`.
//!
//! Reals use [`format_real`] (17 significant digits) so files are byte-stable and
//! parse back exactly.

use std::fmt::Write as _;

use nonmono_core::deblur::DeblurMetrics;
use nonmono_core::profiles::format_real;
use nonmono_core::{DirectionKind, SolveResult, TermKind};

pub const SUMMARY_HEADER: &str = "problem,term,direction,status,N_i,N_f,N_g,f_b,gnorm";
pub const TRACE_HEADER: &str = "k,f_k,g_norm,alpha_k,backtracks,t_k,f_lk,descent_ratio,dir_norm_ratio";
pub const METRICS_HEADER: &str = "iter,f,rel,isnr";
pub const DEBLUR_SUMMARY_HEADER: &str = "term,iters,f,isnr,psnr_linear,psnr_std";

/// One summary row, without a trailing newline.
pub fn summary_line(problem: &str, term: TermKind, direction: DirectionKind, r: &SolveResult) -> String {
    format!(
        "{problem},{term},{direction},{},{},{},{},{},{}",
        r.status,
        r.counters.n_iter,
        r.counters.n_f,
        r.counters.n_g,
        format_real(r.f_b),
        format_real(r.g_norm)
    )
}

pub fn trace_csv(r: &SolveResult) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for t in &r.trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            t.k,
            format_real(t.f_k),
            format_real(t.g_norm),
            format_real(t.alpha_k),
            t.backtracks,
            format_real(t.t_k),
            format_real(t.f_lk),
            format_real(t.descent_ratio),
            format_real(t.dir_norm_ratio)
        );
    }
    out
}

fn optional(v: Option<f64>) -> String {
    v.map(format_real).unwrap_or_default()
}

/// `rel` and `isnr` are left empty when unknown.
pub fn metrics_csv(rows: &[DeblurMetrics]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for m in rows {
        let _ = writeln!(out, "{},{},{},{}", m.iter, format_real(m.f), optional(m.rel), optional(m.isnr));
    }
    out
}
