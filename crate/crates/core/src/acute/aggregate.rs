use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{two_sided_binomial_p, AcuteError, Axis, ComparisonResult, ComparisonTask};
use crate::scalar::Real;

/// Outcome for one (system pair, axis) cell. `system_a` sorts before `system_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport<T> {
    pub system_a: String,
    pub system_b: String,
    pub axis: Axis,
    pub n: usize,
    pub wins_a: usize,
    pub wins_b: usize,
    /// Percentages and p-value are absent for cells without judgments.
    pub win_a_pct: Option<T>,
    pub win_b_pct: Option<T>,
    pub p_value: Option<T>,
}

/// Per-cell win rates after undoing the side shuffle.
///
/// Repeated judgments of a task by the same judge keep the one with the
/// latest timestamp; equal timestamps fall back to the winner ordering so
/// the result never depends on arrival order.
pub fn aggregate<T: Real>(
    results: &[ComparisonResult],
    tasks: &[ComparisonTask],
) -> Result<Vec<CellReport<T>>, AcuteError> {
    let by_id: HashMap<&str, &ComparisonTask> = tasks.iter().map(|t| (t.id.as_str(), t)).collect();

    let mut latest: BTreeMap<(&str, &str), &ComparisonResult> = BTreeMap::new();
    for r in results {
        if !by_id.contains_key(r.task_id.as_str()) {
            return Err(AcuteError::UnknownTask(r.task_id.clone()));
        }
        let slot = latest.entry((r.task_id.as_str(), r.judge_id.as_str())).or_insert(r);
        if (r.timestamp, r.winner) > (slot.timestamp, slot.winner) {
            *slot = r;
        }
    }

    let cell_key = |t: &ComparisonTask| {
        let (a, b) = if t.left_system <= t.right_system {
            (t.left_system.clone(), t.right_system.clone())
        } else {
            (t.right_system.clone(), t.left_system.clone())
        };
        (a, b, t.axis)
    };
    let mut cells: BTreeMap<(String, String, Axis), (usize, usize)> =
        tasks.iter().map(|t| (cell_key(t), (0, 0))).collect();
    for r in latest.values() {
        let task = by_id[r.task_id.as_str()];
        let key = cell_key(task);
        let winner = task.system_on(r.winner);
        let entry = cells.get_mut(&key).expect("every task has a cell");
        if winner == key.0 {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }

    Ok(cells
        .into_iter()
        .map(|((system_a, system_b, axis), (wins_a, wins_b))| {
            let n = wins_a + wins_b;
            let pct = |w| (n > 0).then(|| T::lit(100.0) * T::ratio(w, n));
            CellReport {
                system_a,
                system_b,
                axis,
                n,
                wins_a,
                wins_b,
                win_a_pct: pct(wins_a),
                win_b_pct: pct(wins_b),
                p_value: (n > 0).then(|| two_sided_binomial_p(wins_a, n)),
            }
        })
        .collect())
}

fn stars<T: Real>(p: Option<T>) -> &'static str {
    match p.and_then(|p| p.to_f64()) {
        Some(p) if p < 0.005 => "**",
        Some(p) if p < 0.05 => "*",
        _ => "",
    }
}

/// One matrix per axis: the entry in row R, column C is how often R beat C.
/// `**` marks p < 0.005 and `*` marks p < 0.05; `-` marks empty cells.
pub fn render_matrix<T: Real>(cells: &[CellReport<T>]) -> String {
    let mut out = String::new();
    let axes: BTreeSet<Axis> = cells.iter().map(|c| c.axis).collect();
    for axis in axes {
        let here: Vec<&CellReport<T>> = cells.iter().filter(|c| c.axis == axis).collect();
        let systems: BTreeSet<&str> = here.iter().flat_map(|c| [c.system_a.as_str(), c.system_b.as_str()]).collect();
        let width = systems.iter().map(|s| s.len()).max().unwrap_or(0).max(8) + 2;
        let _ = writeln!(out, "[{axis}] {}", axis.prompt());
        let _ = write!(out, "{:<width$}", "win% vs");
        for s in &systems {
            let _ = write!(out, "{s:>width$}");
        }
        out.push('\n');
        for row in &systems {
            let _ = write!(out, "{row:<width$}");
            for col in &systems {
                let entry = here.iter().find_map(|c| {
                    if c.system_a == *row && c.system_b == *col {
                        Some((c.win_a_pct, c.p_value))
                    } else if c.system_b == *row && c.system_a == *col {
                        Some((c.win_b_pct, c.p_value))
                    } else {
                        None
                    }
                });
                let text = match entry {
                    Some((Some(pct), p)) => format!("{:.0}{}", pct.to_f64().unwrap_or(f64::NAN), stars(p)),
                    Some((None, _)) => "-".to_string(),
                    None => String::new(),
                };
                let _ = write!(out, "{text:>width$}");
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::Side;
    use super::*;

    fn task(id: &str, left: &str, right: &str) -> ComparisonTask {
        ComparisonTask {
            id: id.into(),
            axis: Axis::Engaging,
            dialogue_id: "d".into(),
            left: vec![],
            right: vec![],
            left_system: left.into(),
            right_system: right.into(),
            prompt: Axis::Engaging.prompt().into(),
        }
    }

    fn result(task: &str, judge: &str, winner: Side, ts: u64) -> ComparisonResult {
        ComparisonResult { task_id: task.into(), judge_id: judge.into(), winner, timestamp: ts }
    }

    #[test]
    fn unshuffles_sides() {
        let tasks = vec![task("t1", "a", "b"), task("t2", "b", "a")];
        let results = vec![result("t1", "j", Side::Left, 0), result("t2", "j", Side::Right, 0)];
        let cells: Vec<CellReport<f64>> = aggregate(&results, &tasks).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!((cells[0].wins_a, cells[0].wins_b), (2, 0));
        assert_eq!(cells[0].win_a_pct, Some(100.0));
    }

    #[test]
    fn empty_cell_is_not_fabricated() {
        let cells: Vec<CellReport<f64>> = aggregate(&[], &[task("t", "a", "b")]).unwrap();
        assert_eq!(cells[0].n, 0);
        assert_eq!(cells[0].p_value, None);
        assert!(render_matrix(&cells).contains('-'));
    }

    #[test]
    fn duplicates_resolved_independent_of_order() {
        let tasks = vec![task("t", "a", "b")];
        let mut results = vec![result("t", "j", Side::Left, 1), result("t", "j", Side::Right, 2)];
        let first: Vec<CellReport<f64>> = aggregate(&results, &tasks).unwrap();
        results.reverse();
        let second: Vec<CellReport<f64>> = aggregate(&results, &tasks).unwrap();
        assert_eq!(first, second);
        assert_eq!(first[0].wins_b, 1);
    }

    #[test]
    fn unknown_task() {
        let err = aggregate::<f64>(&[result("x", "j", Side::Left, 0)], &[]).unwrap_err();
        assert_eq!(err, AcuteError::UnknownTask("x".into()));
    }

    #[test]
    fn ninety_of_hundred_is_significant() {
        let tasks: Vec<_> = (0..100).map(|i| task(&format!("t{i}"), "a", "b")).collect();
        let results: Vec<_> =
            (0..100).map(|i| result(&format!("t{i}"), "j", if i < 90 { Side::Left } else { Side::Right }, 0)).collect();
        let cells: Vec<CellReport<f64>> = aggregate(&results, &tasks).unwrap();
        assert!(cells[0].p_value.unwrap() < 0.005);
        assert!(render_matrix(&cells).contains("90**"));
    }
}
