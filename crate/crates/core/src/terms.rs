//! Reference values for nonmonotone Armijo tests.
//!
//! A [`TermState`] is fed the objective value of every accepted iterate and answers with
//! the reference value `T_k` that replaces `f_k` on the right-hand side of the Armijo
//! inequality. All kinds satisfy `T_0 = f_0`.
//!
//! Indexing: after `k` accepted steps the state holds `f_k, f_{k-1}, …` and the weights
//! `η_k, η_{k-1}, …`. The convex recursions consume `η_{k-1}` when producing the value
//! at iteration `k`; the relaxed-max term uses the freshest weight `η_k`.

use alloc::collections::VecDeque;
use alloc::format;

use crate::config::TermKind;
use crate::error::{Error, Result};

/// Weight fixed by the Zhang–Hager average.
pub const ZHANG_HAGER_ETA: f64 = 0.85;

/// How the weights `η_k` evolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaRule {
    /// `η_1 = η_0 / 2`, `η_k = (η_{k-1} + η_{k-2}) / 2`.
    Adaptive { eta0: f64 },
    Fixed(f64),
}

impl EtaRule {
    fn initial(self) -> f64 {
        match self {
            EtaRule::Adaptive { eta0 } => eta0,
            EtaRule::Fixed(eta) => eta,
        }
    }
}

/// Adaptive weight for iteration `k >= 1`.
pub fn update_eta(eta_prev: f64, eta_prev2: f64, k: usize, eta0: f64) -> f64 {
    if k <= 1 {
        eta0 / 2.0
    } else {
        (eta_prev + eta_prev2) / 2.0
    }
}

/// Max of the last `min(k, N) + 1` entries of `history` (oldest first, newest last).
pub fn max_term(history: &[f64], k: usize, memory: usize) -> f64 {
    let take = (k.min(memory) + 1).min(history.len());
    history[history.len() - take..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// One step of the Zhang–Hager recursion; returns `(C', Q')`.
pub fn zh_update(c: f64, q: f64, eta: f64, f_new: f64) -> (f64, f64) {
    let q_new = eta * q + 1.0;
    ((eta * q * c + f_new) / q_new, q_new)
}

/// One step of the convex-combination recursion `D' = f + η (D − f)`.
pub fn mo_update(d: f64, eta: f64, f_new: f64) -> f64 {
    f_new + eta * (d - f_new)
}

/// Relaxed max term `η f_l(k) + (1 − η) f_k`.
pub fn amini_ref(flk: f64, f_k: f64, eta: f64) -> f64 {
    eta * flk + (1.0 - eta) * f_k
}

/// Windowed convex recursion.
///
/// `eta_prev` is `η_{k-1}`, `tbar_prev` is `T̄_{k-1}`; `tail` is
/// `Some((ξ_k, f_{k-N}, f_{k-N-1}))` once `k >= N` and `None` before.
pub fn tbar_step(tbar_prev: f64, eta_prev: f64, f_new: f64, tail: Option<(f64, f64, f64)>) -> f64 {
    let base = (1.0 - eta_prev) * f_new + eta_prev * tbar_prev;
    match tail {
        Some((xi, f_old, f_older)) => base + xi * (f_old - f_older),
        None => base,
    }
}

/// `ξ_k`: product of the weights `η_{k-1} … η_{k-N-1}`.
pub fn xi_product<'a>(window: impl IntoIterator<Item = &'a f64>) -> f64 {
    window.into_iter().product()
}

/// Mutable per-run state of one reference-value strategy.
#[derive(Debug, Clone)]
pub struct TermState {
    kind: TermKind,
    memory: usize,
    rule: EtaRule,
    k: usize,
    /// `f_k` at the back; at most `N + 2` entries.
    f_hist: VecDeque<f64>,
    /// `η_k` at the back; at most `N + 2` entries.
    eta_hist: VecDeque<f64>,
    f0: f64,
    c: f64,
    q: f64,
    d: f64,
    tbar: f64,
    xi: f64,
    flk: f64,
}

impl TermState {
    /// Fresh state with the weight rule the benchmark uses for `kind`: fixed 0.85 for
    /// the Zhang–Hager average, adaptive from `eta0` for everything else.
    pub fn new(kind: TermKind, memory: usize, eta0: f64, f0: f64) -> Result<Self> {
        check_eta(eta0)?;
        let rule = match kind {
            TermKind::H => EtaRule::Fixed(ZHANG_HAGER_ETA),
            _ => EtaRule::Adaptive { eta0 },
        };
        Self::with_rule(kind, memory, rule, f0)
    }

    pub fn with_rule(kind: TermKind, memory: usize, rule: EtaRule, f0: f64) -> Result<Self> {
        check_eta(rule.initial())?;
        if memory == 0 {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        if !f0.is_finite() {
            return Err(Error::Parameter(format!("f0 must be finite, got {f0}")));
        }
        let mut f_hist = VecDeque::with_capacity(memory + 2);
        f_hist.push_back(f0);
        let mut eta_hist = VecDeque::with_capacity(memory + 2);
        eta_hist.push_back(rule.initial());
        Ok(Self {
            kind,
            memory,
            rule,
            k: 0,
            f_hist,
            eta_hist,
            f0,
            c: f0,
            q: 1.0,
            d: f0,
            tbar: f0,
            xi: 1.0,
            flk: f0,
        })
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Most recent accepted value `f_k`.
    pub fn f_k(&self) -> f64 {
        *self.f_hist.back().expect("history is never empty")
    }

    /// `f_l(k)`.
    pub fn f_lk(&self) -> f64 {
        self.flk
    }

    /// Current weight `η_k`.
    pub fn eta(&self) -> f64 {
        *self.eta_hist.back().expect("weights are never empty")
    }

    pub fn zh(&self) -> (f64, f64) {
        (self.c, self.q)
    }

    pub fn mo(&self) -> f64 {
        self.d
    }

    pub fn tbar(&self) -> f64 {
        self.tbar
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `f_{k-j}`, falling back to `f_0` before the start of the run.
    fn f_back(&self, j: usize) -> f64 {
        if j > self.k {
            return self.f0;
        }
        let len = self.f_hist.len();
        self.f_hist[len - 1 - j]
    }

    /// The reference value `T_k`.
    pub fn reference_value(&self) -> f64 {
        let f_k = self.f_k();
        let windowed = self.k >= self.memory;
        match self.kind {
            TermKind::Mono => f_k,
            TermKind::G => self.flk,
            TermKind::H => self.c,
            TermKind::M => self.d,
            TermKind::N => amini_ref(self.flk, f_k, self.eta()),
            TermKind::Nm1 if windowed => self.tbar.max(f_k),
            TermKind::Nm1 => self.flk,
            TermKind::Nm2 if windowed => self.tbar.max(f_k),
            TermKind::Nm2 => self.tbar,
        }
    }

    /// Records the value of the newly accepted iterate and advances `k`.
    pub fn accept(&mut self, f_new: f64) {
        let k_next = self.k + 1;
        let eta_next = match self.rule {
            EtaRule::Fixed(eta) => eta,
            EtaRule::Adaptive { eta0 } => {
                let len = self.eta_hist.len();
                let prev = self.eta_hist[len - 1];
                let prev2 = if len >= 2 { self.eta_hist[len - 2] } else { prev };
                update_eta(prev, prev2, k_next, eta0)
            }
        };
        self.accept_with_next_eta(f_new, eta_next);
    }

    /// Like [`accept`](Self::accept) but with an explicit `η_{k+1}` instead of the rule.
    pub fn accept_with_next_eta(&mut self, f_new: f64, eta_next: f64) {
        debug_assert!((0.0..1.0).contains(&eta_next) || eta_next == 1.0);
        let cap = self.memory + 2;
        let eta_k = self.eta();

        self.k += 1;
        if self.f_hist.len() == cap {
            self.f_hist.pop_front();
        }
        self.f_hist.push_back(f_new);
        if self.eta_hist.len() == cap {
            self.eta_hist.pop_front();
        }
        self.eta_hist.push_back(eta_next);

        let (c, q) = zh_update(self.c, self.q, eta_k, f_new);
        self.c = c;
        self.q = q;
        self.d = mo_update(self.d, eta_k, f_new);

        // ξ_k over η_{k-1} … η_{k-N-1}: everything but the freshest weight
        let len = self.eta_hist.len();
        self.xi = xi_product(self.eta_hist.range(..len - 1));
        let tail = (self.k >= self.memory).then(|| {
            (
                self.xi,
                self.f_back(self.memory),
                self.f_back(self.memory + 1),
            )
        });
        self.tbar = tbar_step(self.tbar, eta_k, f_new, tail);

        let take = self.k.min(self.memory) + 1;
        self.flk = self
            .f_hist
            .iter()
            .rev()
            .take(take)
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
    }

    /// Slack of the sandwich `f_k <= T_k <= f_l(k)`: the largest amount by which either
    /// inequality fails, or a nonpositive number when both hold.
    pub fn sandwich_excess(&self) -> f64 {
        let t = self.reference_value();
        (self.f_k() - t).max(t - self.flk)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("eta must lie in [0, 1), got {eta}")))
    }
}
