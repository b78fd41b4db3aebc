//! Separator-based tree decompositions of planar graphs.

use super::separator::{planar_separator, ALPHA, BETA};
use super::td::{sorted_set, union, TreeDecomposition};
use super::transform::{to_nice_form, Builder};
use super::Graph;
use crate::error::{Error, Result};

/// Base-case size `⌈β² / (1 − α)²⌉`; evaluates to 72.
pub fn base_case_size() -> usize {
    (BETA * BETA / ((1.0 - ALPHA) * (1.0 - ALPHA)) - 1e-9).ceil() as usize
}

/// Bag-size bookkeeping gathered while [`compute_td_audited`] recurses.
#[derive(Clone, Debug, Default)]
pub struct TdAudit {
    pub n0: usize,
    /// Deepest recursion level reached.
    pub depth: usize,
    /// Largest base-case bag.
    pub max_leaf: usize,
    /// Largest value of `|U_call| − (|U_top| + Σ β√n_j)` over recursive calls,
    /// where the sum runs over the separators on the path from the top call.
    /// Non-positive when every separator met its size bound.
    pub max_excess: f64,
    /// `|U_top| + β√n / (1 − √(α(1+ε)))` with `ε = β / (α√n₀)`. Infinite when
    /// `α(1+ε) ≥ 1`, which is the case for the constants used here.
    pub closed_form_bound: f64,
}

/// Nice tree decomposition of the planar graph `g` whose root bag is `u`.
pub fn compute_td(g: &Graph, u: &[usize]) -> Result<TreeDecomposition> {
    compute_td_audited(g, u).map(|(t, _)| t)
}

pub fn compute_td_audited(g: &Graph, u: &[usize]) -> Result<(TreeDecomposition, TdAudit)> {
    let n = g.n();
    let u = sorted_set(u.to_vec());
    if let Some(&v) = u.iter().find(|&&v| v >= n) {
        return Err(Error::IndexOutOfRange { index: v, size: n });
    }
    let n0 = base_case_size();
    let eps = BETA / (ALPHA * (n0 as f64).sqrt());
    let q = (ALPHA * (1.0 + eps)).sqrt();
    let closed_form_bound =
        if q < 1.0 - 1e-12 { u.len() as f64 + BETA * (n as f64).sqrt() / (1.0 - q) } else { f64::INFINITY };
    let mut audit = TdAudit { n0, max_excess: f64::NEG_INFINITY, closed_form_bound, ..Default::default() };
    let mut out = Builder::default();
    let labels: Vec<usize> = (0..n).collect();
    let comps = g.components();
    let root = if comps.len() <= 1 {
        let ctx = Ctx { top: u.len() as f64, path: 0.0, depth: 0 };
        recurse(g, &labels, &u, n0, ctx, &mut out, &mut audit)?
    } else {
        let mut kids = Vec::new();
        for comp in &comps {
            let sub = g.induced(comp);
            let cu: Vec<usize> = comp.iter().enumerate().filter(|(_, v)| u.binary_search(v).is_ok()).map(|(i, _)| i).collect();
            let ctx = Ctx { top: u.len() as f64, path: 0.0, depth: 1 };
            kids.push(recurse(&sub, comp, &cu, n0, ctx, &mut out, &mut audit)?);
        }
        out.push(u.clone(), kids)
    };
    let t = to_nice_form(&out.finish(root))?;
    Ok((t, audit))
}

#[derive(Clone, Copy)]
struct Ctx {
    top: f64,
    path: f64,
    depth: usize,
}

/// Builds the subtree for `g` (vertex `i` is `labels[i]` globally) with root
/// bag `u` (local ids) and returns its root node.
fn recurse(
    g: &Graph,
    labels: &[usize],
    u: &[usize],
    n0: usize,
    ctx: Ctx,
    out: &mut Builder,
    audit: &mut TdAudit,
) -> Result<usize> {
    let n = g.n();
    audit.depth = audit.depth.max(ctx.depth);
    audit.max_excess = audit.max_excess.max(u.len() as f64 - (ctx.top + ctx.path));
    let global = |set: &[usize]| -> Vec<usize> { sorted_set(set.iter().map(|&v| labels[v]).collect()) };
    if n <= n0 {
        audit.max_leaf = audit.max_leaf.max(n);
        let leaf = out.push(labels.to_vec(), Vec::new());
        return Ok(out.push(global(u), vec![leaf]));
    }
    let sep = planar_separator(g)?;
    let ctx = Ctx { top: ctx.top, path: ctx.path + BETA * (n as f64).sqrt(), depth: ctx.depth + 1 };
    let mut in_a = vec![false; n];
    sep.a.iter().for_each(|&v| in_a[v] = true);
    let mut in_b = vec![false; n];
    sep.b.iter().for_each(|&v| in_b[v] = true);
    let mut kids = Vec::with_capacity(2);
    for (part, inside) in [(&sep.a, &in_a), (&sep.b, &in_b)] {
        let verts = sorted_set(part.iter().chain(sep.s.iter()).copied().collect());
        let mut local = vec![usize::MAX; n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let sub = g.induced(&verts);
        let sub_labels: Vec<usize> = verts.iter().map(|&v| labels[v]).collect();
        let sub_u: Vec<usize> = sorted_set(
            sep.s.iter().copied().chain(u.iter().copied().filter(|&v| inside[v])).map(|v| local[v]).collect(),
        );
        kids.push(recurse(&sub, &sub_labels, &sub_u, n0, ctx, out, audit)?);
    }
    let merge_bag = union(&global(&sep.s), &global(u));
    let merge = out.push(merge_bag, kids);
    Ok(out.push(global(u), vec![merge]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_constant() {
        assert_eq!(base_case_size(), 72);
    }
}
