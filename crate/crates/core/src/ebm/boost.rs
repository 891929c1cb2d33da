//! Cyclic Newton boosting over binned terms, shared by both EBM stages.

use crate::gam::logistic;

/// How a term's cells are laid out, which decides the tree shape.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Layout {
    /// Contiguous bins; trees are up to `max_leaves` contiguous segments.
    Line(usize),
    /// Row-major `rows x cols` grid; trees cut one axis, then each side
    /// along the other axis.
    Grid(usize, usize),
}

impl Layout {
    pub(crate) fn cells(self) -> usize {
        match self {
            Layout::Line(n) => n,
            Layout::Grid(r, c) => r * c,
        }
    }
}

pub(crate) struct Term<'a> {
    pub layout: Layout,
    /// Cell of every training row.
    pub train_cells: &'a [u32],
    /// Cell of every validation row.
    pub val_cells: &'a [u32],
}

pub(crate) struct BoostParams {
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_leaves: usize,
    pub min_samples_leaf: usize,
    pub patience: usize,
}

pub(crate) struct BagOutcome {
    /// Per-term cell values at the best round.
    pub values: Vec<Vec<f64>>,
    /// In-bag training logloss after each round, starting with round 0.
    pub train_loss: Vec<f64>,
    /// Validation logloss after each round, when validation rows exist.
    pub val_loss: Vec<f64>,
}

#[derive(Clone, Copy, Default)]
struct Stat {
    g: f64,
    h: f64,
    n: usize,
}

impl Stat {
    fn add(self, o: Stat) -> Stat {
        Stat {
            g: self.g + o.g,
            h: self.h + o.h,
            n: self.n + o.n,
        }
    }

    fn sub(self, o: Stat) -> Stat {
        Stat {
            g: self.g - o.g,
            h: self.h - o.h,
            n: self.n - o.n,
        }
    }

    fn score(self) -> f64 {
        if self.h > 1e-12 {
            self.g * self.g / self.h
        } else {
            0.0
        }
    }

    fn step(self) -> f64 {
        if self.h > 1e-12 {
            -self.g / self.h
        } else {
            0.0
        }
    }
}

fn row_loss(z: f64, y: u8) -> f64 {
    // log(1 + e^z) - y z
    z.max(0.0) + (-z.abs()).exp().ln_1p() - if y == 1 { z } else { 0.0 }
}

pub(crate) fn mean_loss(logits: &[f64], labels: &[u8]) -> f64 {
    if logits.is_empty() {
        return 0.0;
    }
    logits.iter().zip(labels).map(|(&z, &y)| row_loss(z, y)).sum::<f64>() / logits.len() as f64
}

fn accumulate(stats: &mut [Stat], cells: &[u32], logits: &[f64], labels: &[u8]) {
    stats.iter_mut().for_each(|s| *s = Stat::default());
    for ((&c, &z), &y) in cells.iter().zip(logits).zip(labels) {
        let p = logistic(z);
        let s = &mut stats[c as usize];
        s.g += p - y as f64;
        s.h += p * (1.0 - p);
        s.n += 1;
    }
}

/// Best split of `stats[lo..hi]` as `(gain, cut)`; the cut is the first
/// index of the right part.
fn best_split(stats: &[Stat], lo: usize, hi: usize, min_leaf: usize) -> Option<(f64, usize)> {
    let total = stats[lo..hi].iter().fold(Stat::default(), |a, &s| a.add(s));
    let mut left = Stat::default();
    let mut best: Option<(f64, usize)> = None;
    for cut in lo + 1..hi {
        left = left.add(stats[cut - 1]);
        let right = total.sub(left);
        if left.n < min_leaf || right.n < min_leaf {
            continue;
        }
        let gain = left.score() + right.score() - total.score();
        if gain > 1e-12 && best.is_none_or(|(g, _)| gain > g) {
            best = Some((gain, cut));
        }
    }
    best
}

/// Greedy segmentation into at most `max_leaves` contiguous leaves.
fn fit_line(stats: &[Stat], max_leaves: usize, min_leaf: usize) -> Vec<f64> {
    let mut segments = vec![(0, stats.len())];
    while segments.len() < max_leaves {
        let mut best: Option<(f64, usize, usize)> = None;
        for (k, &(lo, hi)) in segments.iter().enumerate() {
            if let Some((gain, cut)) = best_split(stats, lo, hi, min_leaf) {
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, k, cut));
                }
            }
        }
        let Some((_, k, cut)) = best else { break };
        let (lo, hi) = segments[k];
        segments[k] = (lo, cut);
        segments.insert(k + 1, (cut, hi));
    }
    let mut out = vec![0.0; stats.len()];
    for (lo, hi) in segments {
        let step = stats[lo..hi].iter().fold(Stat::default(), |a, &s| a.add(s)).step();
        out[lo..hi].iter_mut().for_each(|v| *v = step);
    }
    out
}

/// Best two-level grid tree. `at(a, b)` reads the grid with `a` as the
/// first-cut axis of length `na`.
fn fit_grid_oriented(
    at: &dyn Fn(usize, usize) -> Stat,
    na: usize,
    nb: usize,
    min_leaf: usize,
) -> Option<(f64, usize, [Option<usize>; 2])> {
    // prefix[a][b] = sum over first-axis index < a
    let mut prefix = vec![vec![Stat::default(); nb]; na + 1];
    for a in 0..na {
        for b in 0..nb {
            prefix[a + 1][b] = prefix[a][b].add(at(a, b));
        }
    }
    let total_strip = &prefix[na];
    let total = total_strip.iter().fold(Stat::default(), |acc, &s| acc.add(s));
    let strip_best = |strip: &[Stat]| -> (f64, Option<usize>) {
        let whole = strip.iter().fold(Stat::default(), |acc, &s| acc.add(s));
        match best_split(strip, 0, strip.len(), min_leaf) {
            Some((gain, cut)) => (whole.score() + gain, Some(cut)),
            None => (whole.score(), None),
        }
    };
    let mut best: Option<(f64, usize, [Option<usize>; 2])> = None;
    for cut in 1..na {
        let low: Vec<Stat> = prefix[cut].clone();
        let high: Vec<Stat> = total_strip.iter().zip(&low).map(|(t, l)| t.sub(*l)).collect();
        let nl: usize = low.iter().map(|s| s.n).sum();
        let nh: usize = high.iter().map(|s| s.n).sum();
        if nl < min_leaf || nh < min_leaf {
            continue;
        }
        let (sl, cl) = strip_best(&low);
        let (sh, ch) = strip_best(&high);
        let gain = sl + sh - total.score();
        if gain > 1e-12 && best.is_none_or(|(g, _, _)| gain > g) {
            best = Some((gain, cut, [cl, ch]));
        }
    }
    best
}

fn fit_grid(stats: &[Stat], rows: usize, cols: usize, min_leaf: usize) -> Vec<f64> {
    let by_row = |a: usize, b: usize| stats[a * cols + b];
    let by_col = |a: usize, b: usize| stats[b * cols + a];
    let row_first = fit_grid_oriented(&by_row, rows, cols, min_leaf);
    let col_first = fit_grid_oriented(&by_col, cols, rows, min_leaf);
    let (transposed, (_, cut, sub)) = match (row_first, col_first) {
        (None, None) => {
            let step = stats.iter().fold(Stat::default(), |a, &s| a.add(s)).step();
            return vec![step; stats.len()];
        }
        (Some(r), None) => (false, r),
        (None, Some(c)) => (true, c),
        (Some(r), Some(c)) => {
            if c.0 > r.0 {
                (true, c)
            } else {
                (false, r)
            }
        }
    };
    let (na, nb) = if transposed { (cols, rows) } else { (rows, cols) };
    let index = |a: usize, b: usize| if transposed { b * cols + a } else { a * cols + b };
    // leaf id per (side, sub-side)
    let leaf = |a: usize, b: usize| -> usize {
        let side = usize::from(a >= cut);
        let sub_side = sub[side].map_or(0, |c| usize::from(b >= c));
        side * 2 + sub_side
    };
    let mut leaves = [Stat::default(); 4];
    for a in 0..na {
        for b in 0..nb {
            let l = leaf(a, b);
            leaves[l] = leaves[l].add(stats[index(a, b)]);
        }
    }
    let mut out = vec![0.0; stats.len()];
    for a in 0..na {
        for b in 0..nb {
            out[index(a, b)] = leaves[leaf(a, b)].step();
        }
    }
    out
}

fn fit_term(layout: Layout, stats: &[Stat], params: &BoostParams) -> Vec<f64> {
    let mut step = match layout {
        Layout::Line(_) => fit_line(stats, params.max_leaves.max(1), params.min_samples_leaf),
        Layout::Grid(r, c) => fit_grid(stats, r, c, params.min_samples_leaf),
    };
    step.iter_mut().for_each(|v| *v *= params.learning_rate);
    step
}

/// Boosts every term on the rows listed in `in_bag`.
///
/// An update is applied only if it does not raise the in-bag loss, so the
/// recorded training loss never increases. The loss of the new logits and
/// the gradient statistics for the next term come from one pass.
pub(crate) fn boost_bag(
    terms: &[Term<'_>],
    labels: &[u8],
    base_logits: &[f64],
    val_labels: &[u8],
    val_base_logits: &[f64],
    in_bag: &[usize],
    params: &BoostParams,
) -> BagOutcome {
    let cells: Vec<Vec<u32>> = terms
        .iter()
        .map(|t| in_bag.iter().map(|&i| t.train_cells[i]).collect())
        .collect();
    let y: Vec<u8> = in_bag.iter().map(|&i| labels[i]).collect();
    let mut logits: Vec<f64> = in_bag.iter().map(|&i| base_logits[i]).collect();
    let mut scratch = vec![0.0; logits.len()];
    let mut val_logits = val_base_logits.to_vec();
    let has_val = !val_labels.is_empty();

    let mut values: Vec<Vec<f64>> = terms.iter().map(|t| vec![0.0; t.layout.cells()]).collect();
    let mut stats: Vec<Vec<Stat>> = terms
        .iter()
        .map(|t| vec![Stat::default(); t.layout.cells()])
        .collect();

    let mut loss = mean_loss(&logits, &y);
    let mut train_loss = vec![loss];
    let mut val_loss = Vec::new();
    let mut best_values = values.clone();
    let mut best_round = 0;
    let mut best_val = f64::INFINITY;
    if has_val {
        best_val = mean_loss(&val_logits, val_labels);
        val_loss.push(best_val);
    }
    if terms.is_empty() {
        return BagOutcome {
            values,
            train_loss,
            val_loss,
        };
    }
    let n = logits.len() as f64;
    let mut stats_fresh = false;

    for round in 1..=params.rounds {
        for t in 0..terms.len() {
            if !stats_fresh {
                accumulate(&mut stats[t], &cells[t], &logits, &y);
            }
            let update = fit_term(terms[t].layout, &stats[t], params);
            // apply into scratch, scoring the loss and preparing the next term
            let next = (t + 1) % terms.len();
            let (cur_cells, next_cells) = (&cells[t], &cells[next]);
            let mut next_stats = vec![Stat::default(); terms[next].layout.cells()];
            let mut new_loss = 0.0;
            for k in 0..logits.len() {
                let z = logits[k] + update[cur_cells[k] as usize];
                scratch[k] = z;
                new_loss += row_loss(z, y[k]);
                let p = logistic(z);
                let s = &mut next_stats[next_cells[k] as usize];
                s.g += p - y[k] as f64;
                s.h += p * (1.0 - p);
                s.n += 1;
            }
            new_loss /= n;
            if new_loss <= loss {
                std::mem::swap(&mut logits, &mut scratch);
                loss = new_loss;
                for (v, u) in values[t].iter_mut().zip(&update) {
                    *v += u;
                }
                if has_val {
                    for (z, &c) in val_logits.iter_mut().zip(terms[t].val_cells) {
                        *z += update[c as usize];
                    }
                }
                stats[next] = next_stats;
                stats_fresh = true;
            } else {
                stats_fresh = false;
            }
        }
        train_loss.push(loss);
        if has_val {
            let v = mean_loss(&val_logits, val_labels);
            val_loss.push(v);
            if v < best_val {
                best_val = v;
                best_round = round;
                best_values.clone_from(&values);
            } else if round - best_round >= params.patience {
                break;
            }
        }
    }
    BagOutcome {
        values: if has_val { best_values } else { values },
        train_loss,
        val_loss,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stat(g: f64, h: f64) -> Stat {
        Stat { g, h, n: 10 }
    }

    #[test]
    fn line_splits_at_sign_change() {
        let stats = vec![stat(2.0, 1.0), stat(2.0, 1.0), stat(-2.0, 1.0), stat(-2.0, 1.0)];
        let v = fit_line(&stats, 3, 1);
        assert_eq!(v, vec![-2.0, -2.0, 2.0, 2.0]);
    }

    #[test]
    fn grid_finds_quadrants() {
        // 2x2 checkerboard of gradients
        let stats = vec![stat(1.0, 1.0), stat(-1.0, 1.0), stat(-1.0, 1.0), stat(1.0, 1.0)];
        let v = fit_grid(&stats, 2, 2, 1);
        assert_eq!(v, vec![-1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn min_leaf_blocks_split() {
        let stats = vec![Stat { g: 3.0, h: 1.0, n: 1 }, stat(-1.0, 1.0)];
        let v = fit_line(&stats, 3, 2);
        assert_eq!(v[0], v[1]);
    }
}
