use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AcuteError, Axis, ComparisonTask};
use crate::augment::AugmentedDialogue;

/// One task per unordered system pair, shared dialogue and axis, with a
/// seeded coin flip deciding which system is shown on the left.
pub fn build_pairs(
    variants: &BTreeMap<String, Vec<AugmentedDialogue>>,
    axes: &[Axis],
    seed: u64,
) -> Result<Vec<ComparisonTask>, AcuteError> {
    if variants.len() < 2 {
        return Err(AcuteError::TooFewSystems(variants.len()));
    }
    let by_id: BTreeMap<&str, BTreeMap<&str, &AugmentedDialogue>> = variants
        .iter()
        .map(|(system, ds)| (system.as_str(), ds.iter().map(|d| (d.dialogue.id.as_str(), d)).collect()))
        .collect();
    let systems: Vec<&str> = by_id.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tasks = Vec::new();
    for (i, &a) in systems.iter().enumerate() {
        for &b in &systems[i + 1..] {
            let shared: Vec<&str> = by_id[a].keys().filter(|id| by_id[b].contains_key(*id)).copied().collect();
            if shared.is_empty() {
                return Err(AcuteError::NoSharedDialogues(a.to_string(), b.to_string()));
            }
            for dialogue_id in shared {
                for &axis in axes {
                    let (left, right) = if rng.random_bool(0.5) { (b, a) } else { (a, b) };
                    tasks.push(ComparisonTask {
                        id: format!("{a}~{b}~{dialogue_id}~{axis}"),
                        axis,
                        dialogue_id: dialogue_id.to_string(),
                        left: by_id[left][dialogue_id].transcript(),
                        right: by_id[right][dialogue_id].transcript(),
                        left_system: left.to_string(),
                        right_system: right.to_string(),
                        prompt: axis.prompt().to_string(),
                    });
                }
            }
        }
    }
    Ok(tasks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Dialogue, Speaker, Turn};

    fn systems(n: usize, dialogues: usize) -> BTreeMap<String, Vec<AugmentedDialogue>> {
        (0..n)
            .map(|s| {
                let ds = (0..dialogues)
                    .map(|i| {
                        AugmentedDialogue::new(Dialogue {
                            id: format!("d{i}"),
                            services: vec![],
                            turns: vec![Turn::new(0, Speaker::User, "hi"), Turn::new(1, Speaker::System, format!("sys{s}"))],
                        })
                    })
                    .collect();
                (format!("m{s}"), ds)
            })
            .collect()
    }

    #[test]
    fn task_counts() {
        assert_eq!(build_pairs(&systems(2, 10), &Axis::ALL, 0).unwrap().len(), 40);
        assert_eq!(build_pairs(&systems(4, 100), &[Axis::Engaging], 0).unwrap().len(), 600);
    }

    #[test]
    fn prompts_and_sides() {
        let tasks = build_pairs(&systems(2, 50), &Axis::ALL, 3).unwrap();
        for t in &tasks {
            assert_eq!(t.prompt, t.axis.prompt());
            assert_eq!(t.left[1].utterance, format!("sys{}", &t.left_system[1..]));
        }
        let left_m0 = tasks.iter().filter(|t| t.left_system == "m0").count();
        assert!(left_m0 > 60 && left_m0 < 140, "{left_m0}");
    }

    #[test]
    fn argument_errors() {
        assert_eq!(build_pairs(&systems(1, 3), &Axis::ALL, 0).unwrap_err(), AcuteError::TooFewSystems(1));
        let mut v = systems(2, 2);
        v.get_mut("m1").unwrap().iter_mut().for_each(|d| d.dialogue.id.push('x'));
        assert!(matches!(build_pairs(&v, &Axis::ALL, 0), Err(AcuteError::NoSharedDialogues(..))));
    }
}
