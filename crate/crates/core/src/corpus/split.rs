use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CorpusError, UtteranceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitStrategy {
    /// Seeded shuffle of the id-sorted records.
    #[default]
    Random,
    /// Train on the earliest material, then dev, then test, ordered by
    /// recording id and start time.
    Chronological,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSpec {
    pub n_dev: usize,
    pub n_test: usize,
    pub seed: u64,
    pub strategy: SplitStrategy,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            n_dev: 25,
            n_test: 25,
            seed: 0,
            strategy: SplitStrategy::Random,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<UtteranceRecord>,
    pub dev: Vec<UtteranceRecord>,
    pub test: Vec<UtteranceRecord>,
}

/// Partitions records into train/dev/test with exact dev and test sizes.
/// Each partition comes back sorted by utterance id. The result depends only
/// on the record set and the spec, not on input order.
pub fn split(records: &[UtteranceRecord], spec: &SplitSpec) -> Result<Split, CorpusError> {
    let held_out = spec.n_dev + spec.n_test;
    if held_out >= records.len() {
        return Err(CorpusError::NotEnoughRecords {
            requested: held_out,
            available: records.len(),
        });
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = records.iter().find(|r| !seen.insert(r.utt_id.as_str())) {
        return Err(CorpusError::DuplicateUttId(dup.utt_id.clone()));
    }

    let mut ordered: Vec<UtteranceRecord> = records.to_vec();
    ordered.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
    let (dev, test, train) = match spec.strategy {
        SplitStrategy::Random => {
            ordered.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
            let train = ordered.split_off(held_out);
            let test = ordered.split_off(spec.n_dev);
            (ordered, test, train)
        }
        SplitStrategy::Chronological => {
            ordered.sort_by(|a, b| {
                a.recording_id
                    .cmp(&b.recording_id)
                    .then(a.start_s.total_cmp(&b.start_s))
                    .then(a.utt_id.cmp(&b.utt_id))
            });
            let n_train = ordered.len() - held_out;
            let mut rest = ordered.split_off(n_train);
            let test = rest.split_off(spec.n_dev);
            (rest, test, ordered)
        }
    };

    let sorted = |mut v: Vec<UtteranceRecord>| {
        v.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
        v
    };
    Ok(Split {
        train: sorted(train),
        dev: sorted(dev),
        test: sorted(test),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DEFAULT_SPEAKER_ID;

    fn records(n: usize) -> Vec<UtteranceRecord> {
        (0..n)
            .map(|i| UtteranceRecord {
                utt_id: format!("rec{}_{:04}", i % 3, i),
                recording_id: format!("rec{}", i % 3),
                start_s: i as f64,
                end_s: i as f64 + 0.5,
                text_raw: format!("t{i}"),
                text_vowelized: format!("t{i}"),
                emotion: None,
                align_score: None,
                speaker_id: DEFAULT_SPEAKER_ID.into(),
            })
            .collect()
    }

    fn ids(v: &[UtteranceRecord]) -> Vec<&str> {
        v.iter().map(|r| r.utt_id.as_str()).collect()
    }

    #[test]
    fn twelve_hundred_with_defaults() {
        let s = split(&records(1200), &SplitSpec::default()).unwrap();
        assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (1150, 25, 25));
    }

    #[test]
    fn boundary_leaves_one_for_training() {
        let s = split(&records(51), &SplitSpec::default()).unwrap();
        assert_eq!(s.train.len(), 1);
        assert!(matches!(
            split(&records(50), &SplitSpec::default()),
            Err(CorpusError::NotEnoughRecords { requested: 50, available: 50 })
        ));
    }

    #[test]
    fn deterministic_and_order_free() {
        let recs = records(300);
        let spec = SplitSpec { seed: 9, ..SplitSpec::default() };
        let a = split(&recs, &spec).unwrap();
        let mut reversed = recs.clone();
        reversed.reverse();
        let b = split(&reversed, &spec).unwrap();
        assert_eq!(a, b);
        let c = split(&recs, &SplitSpec { seed: 10, ..spec }).unwrap();
        assert_ne!(ids(&a.dev), ids(&c.dev));
    }

    #[test]
    fn chronological_holds_out_the_end() {
        let spec = SplitSpec {
            n_dev: 2,
            n_test: 2,
            strategy: SplitStrategy::Chronological,
            ..SplitSpec::default()
        };
        let s = split(&records(12), &spec).unwrap();
        // rec2 sorts last; its final four utterances are 2, 5, 8, 11.
        assert_eq!(ids(&s.dev), vec!["rec2_0002", "rec2_0005"]);
        assert_eq!(ids(&s.test), vec!["rec2_0008", "rec2_0011"]);
    }

    #[test]
    fn duplicates_rejected() {
        let mut recs = records(60);
        recs[1].utt_id = recs[0].utt_id.clone();
        assert!(matches!(split(&recs, &SplitSpec::default()), Err(CorpusError::DuplicateUttId(_))));
    }
}
