//! Bounded per-node message store with drop-oldest eviction.

use crate::error::{Error, Result};

use super::{Message, MessageId};

#[derive(Debug, Clone, PartialEq)]
pub struct BufferEntry {
    pub msg: Message,
    pub received_at: f64,
    /// First instant this copy may be forwarded on. Creation makes a copy
    /// immediately forwardable; a relayed copy must wait one engine step.
    pub forwardable_at: f64,
}

/// FIFO byte-bounded buffer. Entries stay in arrival order, so the front is
/// always the oldest `received_at`.
#[derive(Debug, Clone, PartialEq)]
pub struct BufferState {
    capacity: u64,
    occupied: u64,
    entries: Vec<BufferEntry>,
}

#[derive(Debug, Default, PartialEq)]
pub struct InsertOutcome {
    /// Ids evicted to make room, oldest first.
    pub dropped: Vec<MessageId>,
    /// True when the message was already buffered and nothing changed.
    pub duplicate: bool,
}

impl BufferState {
    pub fn new(capacity: u64) -> Self {
        assert!(capacity > 0, "buffer capacity must be positive");
        BufferState { capacity, occupied: 0, entries: Vec::new() }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn occupied(&self) -> u64 {
        self.occupied
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: MessageId) -> bool {
        self.entries.iter().any(|e| e.msg.id == id)
    }

    pub fn get(&self, id: MessageId) -> Option<&BufferEntry> {
        self.entries.iter().find(|e| e.msg.id == id)
    }

    pub fn entries(&self) -> &[BufferEntry] {
        &self.entries
    }

    /// Inserts a copy, evicting oldest-received entries one at a time until
    /// it fits. Duplicates are rejected without change.
    pub fn insert(
        &mut self,
        msg: Message,
        now: f64,
        forwardable_at: f64,
    ) -> Result<InsertOutcome> {
        if msg.size > self.capacity {
            return Err(Error::TooLarge { size: msg.size, capacity: self.capacity });
        }
        if self.contains(msg.id) {
            return Ok(InsertOutcome { dropped: Vec::new(), duplicate: true });
        }
        let mut dropped = Vec::new();
        while self.occupied + msg.size > self.capacity {
            let evicted = self.entries.remove(0);
            self.occupied -= evicted.msg.size;
            dropped.push(evicted.msg.id);
        }
        self.occupied += msg.size;
        self.entries.push(BufferEntry { msg, received_at: now, forwardable_at });
        Ok(InsertOutcome { dropped, duplicate: false })
    }

    /// Removes one entry by id (delivery absorption or external bookkeeping).
    pub fn remove(&mut self, id: MessageId) -> Option<BufferEntry> {
        let ix = self.entries.iter().position(|e| e.msg.id == id)?;
        let entry = self.entries.remove(ix);
        self.occupied -= entry.msg.size;
        Some(entry)
    }

    /// Drops every entry whose age strictly exceeds its ttl.
    pub fn expire(&mut self, now: f64) -> Vec<MessageId> {
        let mut expired = Vec::new();
        self.entries.retain(|e| {
            if e.msg.expired_at(now) {
                expired.push(e.msg.id);
                false
            } else {
                true
            }
        });
        for _ in &expired {}
        self.occupied = self.entries.iter().map(|e| e.msg.size).sum();
        expired
    }
}

/// Functional form of [`BufferState::insert`] with `forwardable_at = now`.
pub fn buffer_insert(buf: &mut BufferState, msg: Message, now: f64) -> Result<InsertOutcome> {
    buf.insert(msg, now, now)
}

/// Functional form of [`BufferState::expire`].
pub fn expire_ttl(buf: &mut BufferState, now: f64) -> Vec<MessageId> {
    buf.expire(now)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::NodeIx;

    const MB: u64 = 1_000_000;

    fn msg(id: u64, size: u64, created_at: f64) -> Message {
        msg_to(id, size, created_at, 1)
    }

    fn msg_to(id: u64, size: u64, created_at: f64, destination: NodeIx) -> Message {
        Message::new(MessageId(id), 0, destination, created_at, size, 3600.0)
    }

    #[test]
    fn oldest_received_is_evicted_first() {
        let mut buf = BufferState::new(2 * MB);
        buffer_insert(&mut buf, msg(1, MB, 0.0), 10.0).unwrap();
        buffer_insert(&mut buf, msg(2, MB, 0.0), 20.0).unwrap();
        let out = buffer_insert(&mut buf, msg(3, MB, 0.0), 30.0).unwrap();
        assert_eq!(out.dropped, vec![MessageId(1)]);
        assert!(buf.contains(MessageId(2)) && buf.contains(MessageId(3)));
        assert_eq!(buf.occupied(), 2 * MB);
    }

    #[test]
    fn duplicates_are_rejected_without_change() {
        let mut buf = BufferState::new(2 * MB);
        buffer_insert(&mut buf, msg(1, MB, 0.0), 10.0).unwrap();
        let before = buf.clone();
        let out = buffer_insert(&mut buf, msg(1, MB, 0.0), 20.0).unwrap();
        assert!(out.duplicate);
        assert!(out.dropped.is_empty());
        assert_eq!(buf, before);
    }

    #[test]
    fn oversized_message_is_too_large() {
        let mut buf = BufferState::new(2 * MB);
        let err = buffer_insert(&mut buf, msg(1, 3 * MB, 0.0), 0.0).unwrap_err();
        assert!(matches!(err, Error::TooLarge { size, capacity } if size == 3 * MB && capacity == 2 * MB));
    }

    #[test]
    fn several_evictions_make_room_for_one_large() {
        let mut buf = BufferState::new(4 * MB);
        for i in 0..4 {
            buffer_insert(&mut buf, msg(i, MB, 0.0), i as f64).unwrap();
        }
        let out = buffer_insert(&mut buf, msg(9, 3 * MB, 0.0), 99.0).unwrap();
        assert_eq!(out.dropped, vec![MessageId(0), MessageId(1), MessageId(2)]);
        assert_eq!(buf.occupied(), 4 * MB);
    }

    #[test]
    fn ttl_expiry_is_strictly_greater_than() {
        let mut buf = BufferState::new(MB);
        buffer_insert(&mut buf, msg(1, 1000, 0.0), 0.0).unwrap();
        assert!(expire_ttl(&mut buf, 3600.0).is_empty());
        assert_eq!(expire_ttl(&mut buf, 3601.0), vec![MessageId(1)]);
        assert!(buf.is_empty());
        assert_eq!(buf.occupied(), 0);
    }

    #[test]
    fn expiring_an_empty_buffer_is_a_no_op() {
        let mut buf = BufferState::new(MB);
        assert!(expire_ttl(&mut buf, 1e9).is_empty());
    }
}
