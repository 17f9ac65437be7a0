//! Draw-call accounting.
//!
//! `PerFeature` mirrors a renderer that submits every stroke feature on its
//! own: one call per segment body, one per two-triangle join, and one per
//! fan triangle, since the fan baseline draws each gradient triangle as a
//! separate primitive. `Batched` merges contiguous submissions that share a
//! label and a style into a single call.

use serde::{Deserialize, Serialize};

use crate::tessellation::{BatchLabel, StrokeStyle, TriangleBatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum AccountingMode {
    #[default]
    PerFeature,
    Batched,
}

impl std::str::FromStr for AccountingMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "per-feature" => Ok(AccountingMode::PerFeature),
            "batched" => Ok(AccountingMode::Batched),
            other => Err(format!("unknown accounting mode {other:?} (per-feature|batched)")),
        }
    }
}

/// Incremental draw-call counter fed with batches in submission order.
#[derive(Debug, Clone)]
pub struct CallCounter {
    mode: AccountingMode,
    last: Option<(BatchLabel, StrokeStyle)>,
    calls: u64,
}

impl CallCounter {
    pub fn new(mode: AccountingMode) -> Self {
        CallCounter { mode, last: None, calls: 0 }
    }

    /// Records one batch submission and returns the calls it added.
    pub fn submit(&mut self, batch: &TriangleBatch, style: &StrokeStyle) -> u64 {
        if batch.is_empty() {
            return 0;
        }
        let added = match self.mode {
            AccountingMode::PerFeature => match batch.label {
                BatchLabel::JoinFan => batch.triangle_count() as u64,
                BatchLabel::SegmentBody | BatchLabel::JoinProposed => 1,
            },
            AccountingMode::Batched => {
                let key = (batch.label, *style);
                if self.last == Some(key) {
                    0
                } else {
                    self.last = Some(key);
                    1
                }
            }
        };
        self.calls += added;
        added
    }

    pub fn total(&self) -> u64 {
        self.calls
    }
}

/// Draw calls needed for `batches`, all drawn with one style.
pub fn count_draw_calls(batches: &[TriangleBatch], style: &StrokeStyle, mode: AccountingMode) -> u64 {
    let mut counter = CallCounter::new(mode);
    for b in batches {
        counter.submit(b, style);
    }
    counter.total()
}
