use std::collections::BTreeSet;

use super::MetricsError;
use crate::corpus::{ActionTriplet, BeliefTriplet};
use crate::scalar::Field;
use crate::text::collapse_whitespace;

fn norm(s: &str) -> String {
    collapse_whitespace(&s.to_lowercase())
}

fn norm_belief(set: &BTreeSet<BeliefTriplet>) -> BTreeSet<(String, String, String)> {
    set.iter().map(|t| (norm(&t.domain), norm(&t.slot), norm(&t.value))).collect()
}

fn check_len<A, B>(pred: &[A], gold: &[B]) -> Result<(), MetricsError> {
    if pred.len() != gold.len() {
        return Err(MetricsError::LengthMismatch { pred: pred.len(), gold: gold.len() });
    }
    Ok(())
}

/// Fraction of turns whose predicted belief equals the gold belief after
/// case and whitespace normalization. Vacuously 1 with no turns.
pub fn joint_goal_accuracy<T: Field>(
    pred: &[BTreeSet<BeliefTriplet>],
    gold: &[BTreeSet<BeliefTriplet>],
) -> Result<T, MetricsError> {
    check_len(pred, gold)?;
    if gold.is_empty() {
        return Ok(T::one());
    }
    let hits = pred.iter().zip(gold).filter(|(p, g)| norm_belief(p) == norm_belief(g)).count();
    Ok(T::ratio(hits, gold.len()))
}

/// Fraction of gold slots with a non-empty value whose value was predicted
/// for the same turn. Unpredicted slots are wrong; extra predictions are
/// ignored. Vacuously 1 with no gold slots.
pub fn average_goal_accuracy<T: Field>(
    pred: &[BTreeSet<BeliefTriplet>],
    gold: &[BTreeSet<BeliefTriplet>],
) -> Result<T, MetricsError> {
    check_len(pred, gold)?;
    let mut total = 0;
    let mut hits = 0;
    for (p, g) in pred.iter().zip(gold) {
        let p = norm_belief(p);
        for slot in norm_belief(g).into_iter().filter(|(_, _, v)| !v.is_empty()) {
            total += 1;
            if p.contains(&slot) {
                hits += 1;
            }
        }
    }
    Ok(if total == 0 { T::one() } else { T::ratio(hits, total) })
}

/// Micro-averaged F1 over action triplets pooled across turns.
pub fn act_slot_f1<T: Field>(
    pred: &[BTreeSet<ActionTriplet>],
    gold: &[BTreeSet<ActionTriplet>],
) -> Result<T, MetricsError> {
    check_len(pred, gold)?;
    let (mut tp, mut n_pred, mut n_gold) = (0, 0, 0);
    for (p, g) in pred.iter().zip(gold) {
        tp += p.intersection(g).count();
        n_pred += p.len();
        n_gold += g.len();
    }
    if n_pred + n_gold == 0 {
        return Ok(T::one());
    }
    // 2PR/(P+R) reduces to 2tp/(|pred|+|gold|)
    Ok(T::ratio(2 * tp, n_pred + n_gold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn b(items: &[(&str, &str, &str)]) -> BTreeSet<BeliefTriplet> {
        items.iter().map(|(d, s, v)| BeliefTriplet::new(*d, *s, *v)).collect()
    }

    fn a(items: &[&str]) -> BTreeSet<ActionTriplet> {
        items.iter().map(|s| ActionTriplet::new("d", "inform", *s)).collect()
    }

    #[test]
    fn joint_half() {
        let gold = vec![b(&[("r", "city", "Paris")]), b(&[("r", "city", "Rome")])];
        let pred = vec![b(&[("r", "city", " paris ")]), b(&[])];
        assert_eq!(joint_goal_accuracy::<f64>(&pred, &gold).unwrap(), 0.5);
        assert_eq!(joint_goal_accuracy::<f64>(&gold, &gold).unwrap(), 1.0);
    }

    #[test]
    fn avg_counts_gold_slots() {
        let gold = vec![b(&[("r", "city", "Paris"), ("r", "time", "")]), b(&[("r", "party", "2")])];
        let pred = vec![b(&[("r", "city", "paris"), ("r", "extra", "x")]), b(&[])];
        assert_eq!(average_goal_accuracy::<Ratio<i64>>(&pred, &gold).unwrap(), Ratio::new(1, 2));
        assert_eq!(average_goal_accuracy::<f64>(&[b(&[])], &[b(&[])]).unwrap(), 1.0);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            joint_goal_accuracy::<f64>(&[], &[b(&[])]).unwrap_err(),
            MetricsError::LengthMismatch { pred: 0, gold: 1 }
        );
    }

    #[test]
    fn f1_cases() {
        assert_eq!(act_slot_f1::<Ratio<i64>>(&[a(&["a", "b"])], &[a(&["b", "c"])]).unwrap(), Ratio::new(1, 2));
        assert_eq!(act_slot_f1::<f64>(&[a(&[])], &[a(&["x"])]).unwrap(), 0.0);
        assert_eq!(act_slot_f1::<f64>(&[a(&[])], &[a(&[])]).unwrap(), 1.0);
        assert_eq!(act_slot_f1::<f64>(&[a(&["x"])], &[a(&["x"])]).unwrap(), 1.0);
    }
}
