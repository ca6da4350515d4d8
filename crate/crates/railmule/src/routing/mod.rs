//! Store-carry-forward state: the bounded message buffer and the two
//! routing protocols (epidemic flooding, PROPHET probabilistic forwarding).

mod buffer;
mod epidemic;
mod prophet;

pub use buffer::{buffer_insert, expire_ttl, BufferEntry, BufferState, InsertOutcome};
pub use epidemic::{epidemic_exchange, next_wanted, ExchangeOutcome, TransferRecord};
pub use prophet::{
    prophet_age, prophet_encounter_update, prophet_forward_decision, prophet_transitivity,
    PredictabilityTable, ProphetParams,
};

use crate::radio::NodeIx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessageId(pub u64);

impl std::fmt::Display for MessageId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One alert payload. Each buffered copy owns its own `Message`, so
/// `hop_count` tracks the transfers that particular copy has undergone.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub id: MessageId,
    pub source: NodeIx,
    pub destination: NodeIx,
    pub created_at: f64,
    pub size: u64,
    pub ttl: f64,
    pub hop_count: u32,
}

impl Message {
    pub fn new(
        id: MessageId,
        source: NodeIx,
        destination: NodeIx,
        created_at: f64,
        size: u64,
        ttl: f64,
    ) -> Self {
        assert!(size > 0, "message size must be positive");
        assert!(ttl > 0.0, "message ttl must be positive");
        Message { id, source, destination, created_at, size, ttl, hop_count: 0 }
    }

    pub fn expired_at(&self, now: f64) -> bool {
        now - self.created_at > self.ttl
    }
}
