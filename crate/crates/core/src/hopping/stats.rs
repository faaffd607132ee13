use serde::{Deserialize, Serialize};

/// Windowed estimates for one subband over one episode.
///
/// `sinr_db` is present iff the subband was played (`count > 0`);
/// `snr_db` iff at least one of those chirps was interference-free.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SubbandEstimate {
    pub count: usize,
    pub clean_count: usize,
    pub sinr_db: Option<f64>,
    pub snr_db: Option<f64>,
}

/// Per-subband SINR/SNR estimates of one radar for one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeStats {
    subbands: Vec<SubbandEstimate>,
}

impl EpisodeStats {
    pub fn new(subbands: Vec<SubbandEstimate>) -> Self {
        Self { subbands }
    }

    /// Stats with nothing observed.
    pub fn empty(actions: usize) -> Self {
        Self {
            subbands: vec![SubbandEstimate::default(); actions],
        }
    }

    /// Shorthand for tests and examples: `(subband, count, sinr_db)` entries
    /// observed without interference, so the SNR equals the SINR.
    pub fn from_clean(actions: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut stats = Self::empty(actions);
        for &(f, count, db) in entries {
            stats.subbands[f] = SubbandEstimate {
                count,
                clean_count: count,
                sinr_db: Some(db),
                snr_db: Some(db),
            };
        }
        stats
    }

    pub fn actions(&self) -> usize {
        self.subbands.len()
    }

    pub fn subband(&self, f: usize) -> &SubbandEstimate {
        &self.subbands[f]
    }

    pub fn subbands(&self) -> &[SubbandEstimate] {
        &self.subbands
    }

    pub fn count(&self, f: usize) -> usize {
        self.subbands[f].count
    }

    pub fn clean_count(&self, f: usize) -> usize {
        self.subbands[f].clean_count
    }

    pub fn sinr_db(&self, f: usize) -> Option<f64> {
        self.subbands[f].sinr_db
    }

    pub fn snr_db(&self, f: usize) -> Option<f64> {
        self.subbands[f].snr_db
    }

    pub fn total_count(&self) -> usize {
        self.subbands.iter().map(|s| s.count).sum()
    }
}
