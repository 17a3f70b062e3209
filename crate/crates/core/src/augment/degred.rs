use serde::{Deserialize, Serialize};

use super::checks::{check_blocking, check_components};
use super::layering::{build_layering, LayeringState, UNLAYERED};
use super::sequence::validate_sequence;
use super::AugmentError;
use crate::graph::Graph;
use crate::tree::SpanningTree;

/// Extra self-checks for tests; all of them are slow.
#[derive(Clone, Copy, Debug, Default)]
pub struct DegRedOptions {
    /// Recompute every layer partition from scratch after each modification.
    pub check_components: bool,
    /// Verify the blocking property whenever the state turns terminal.
    pub check_blocking: bool,
    /// Check each sequence with explicit tree paths before applying it.
    pub validate_sequences: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegRedReport {
    pub k: usize,
    pub d_before: usize,
    pub d_after: usize,
    pub modifications: usize,
    pub marked_growth: usize,
    /// Top layer index at the start of every repeat iteration.
    pub h_trace: Vec<usize>,
    /// Repeat iterations whose fresh layering did not raise `h`.
    pub h_non_increase: usize,
    /// Of those, iterations in which no anchor dropped out of `S_k`.
    pub h_non_increase_clean: usize,
    /// `d_k` after each modification.
    pub d_trace: Vec<usize>,
    /// `|S_k|` after each modification.
    pub s_trace: Vec<usize>,
    /// Sequences checked by `validate_sequences`.
    pub validated: usize,
    /// Whether the call ended because `S_k` ran empty.
    pub emptied: bool,
    /// `h` and `|B_0|, ..., |B_L|` of the last layering.
    pub last_h: usize,
    pub last_layer_sizes: Vec<usize>,
    #[serde(skip)]
    pub final_state: Option<LayeringState>,
}

/// Lowers `d_k` as far as the layering search allows.
///
/// Returns once the layering is terminal or `S_k` is empty. In the first case
/// `final_state` holds the terminal layering.
pub fn aug_seq_deg_red(
    g: &Graph,
    t: &mut SpanningTree,
    k: usize,
    eps: f64,
) -> Result<DegRedReport, AugmentError> {
    aug_seq_deg_red_with(g, t, k, eps, &DegRedOptions::default())
}

pub fn aug_seq_deg_red_with(
    g: &Graph,
    t: &mut SpanningTree,
    k: usize,
    eps: f64,
    opts: &DegRedOptions,
) -> Result<DegRedReport, AugmentError> {
    if k < 3 {
        return Err(AugmentError::ThresholdTooSmall(k));
    }
    let marked: Vec<bool> = (0..g.n()).map(|v| t.degree(v) + 1 == k).collect();
    let mut dk = t.degree_sum_at_least(k);
    let mut state = build_layering(g, t, k, eps, marked)?;
    let mut report = DegRedReport {
        k,
        d_before: dk,
        d_after: dk,
        modifications: 0,
        marked_growth: 0,
        h_trace: Vec::new(),
        h_non_increase: 0,
        h_non_increase_clean: 0,
        d_trace: Vec::new(),
        s_trace: Vec::new(),
        validated: 0,
        emptied: false,
        last_h: 0,
        last_layer_sizes: Vec::new(),
        final_state: None,
    };
    loop {
        report.h_trace.push(state.h);
        let mods_before = report.modifications;
        let anchors_before = state.live_anchors;
        scan(g, t, &mut state, &mut dk, &mut report, opts)?;
        if state.live_anchors == 0 {
            report.emptied = true;
            break;
        }
        if state.h >= state.h_max {
            if opts.check_blocking {
                check_blocking(g, t, &state).map_err(|v| AugmentError::Invariant(v.to_string()))?;
            }
            break;
        }
        let prev = state.h;
        let no_anchor_lost = state.live_anchors == anchors_before;
        state.relayer(g, t)?;
        if state.h <= prev {
            if report.modifications == mods_before {
                return Err(AugmentError::Invariant(format!("layering stalled at h = {prev}")));
            }
            report.h_non_increase += 1;
            if no_anchor_lost {
                report.h_non_increase_clean += 1;
            }
        }
    }
    report.d_after = dk;
    report.last_h = state.h;
    report.last_layer_sizes = state.layers.iter().map(Vec::len).collect();
    if !report.emptied {
        report.final_state = Some(state);
    }
    Ok(report)
}

/// One pass over the edges in id order, applying every sequence found.
fn scan(
    g: &Graph,
    t: &mut SpanningTree,
    state: &mut LayeringState,
    dk: &mut usize,
    report: &mut DegRedReport,
    opts: &DegRedOptions,
) -> Result<(), AugmentError> {
    let top = state.h + 1;
    for e in 0..g.m() {
        if state.live_anchors == 0 {
            return Ok(());
        }
        let (u, v) = g.endpoints(e);
        if state.layer_of[u] != UNLAYERED || state.layer_of[v] != UNLAYERED {
            continue;
        }
        if state.marked[u] || state.marked[v] || t.contains_edge(e) {
            continue;
        }
        if state.same_component(state.h, u, v) {
            continue;
        }
        let Some(seq) = state.aug_dfs(g, top, u, v)? else {
            continue;
        };
        if opts.validate_sequences {
            let r = validate_sequence(g, t, state.k, &state.marked, &seq);
            if !r.is_valid() {
                return Err(AugmentError::Invariant(format!("invalid sequence: {:?}", r.violations)));
            }
            report.validated += 1;
        }
        let m = state.apply(g, t, &seq, *dk)?;
        *dk = m.d_k_after;
        report.modifications += 1;
        report.marked_growth += m.newly_marked.len();
        report.d_trace.push(*dk);
        report.s_trace.push(t.count_at_least(state.k));
        if opts.check_components {
            check_components(g, t, state).map_err(AugmentError::Invariant)?;
        }
    }
    Ok(())
}
