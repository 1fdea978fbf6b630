use thiserror::Error;

const NIL: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueueError {
    #[error("element {0} is not in the queue")]
    Missing(usize),
    #[error("element {0} is already in the queue")]
    AlreadyPresent(usize),
    #[error("element {index} has key {current}; refusing to raise it to {requested}")]
    IncreaseKey {
        index: usize,
        current: usize,
        requested: usize,
    },
    #[error("key {key} is outside 0..{num_keys}")]
    KeyOutOfRange { key: usize, num_keys: usize },
    #[error("key {key} is above the current maximum {max}")]
    KeyAboveMax { key: usize, max: usize },
    #[error("element {index} is outside 0..{capacity}")]
    IndexOutOfRange { index: usize, capacity: usize },
}

/// Max-priority structure for monotone workloads: an array of intrusive
/// doubly-linked lists indexed by key, plus a cursor on the largest key that
/// may be nonempty.
///
/// Keys only ever decrease, so the cursor only moves down and the total
/// scanning cost of a run is bounded by the number of keys. Within a bucket
/// the most recently inserted element is reported first.
#[derive(Debug, Clone)]
pub struct BucketQueue {
    heads: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    keys: Vec<u32>,
    present: Vec<bool>,
    len: usize,
    cursor: usize,
    cursor_moves: u64,
}

impl BucketQueue {
    /// Queue over keys `0..num_keys` holding element ids `0..capacity`.
    pub fn new(num_keys: usize, capacity: usize) -> Self {
        assert!(num_keys > 0, "a bucket queue needs at least one key");
        BucketQueue {
            heads: vec![NIL; num_keys],
            next: vec![NIL; capacity],
            prev: vec![NIL; capacity],
            keys: vec![0; capacity],
            present: vec![false; capacity],
            len: 0,
            cursor: num_keys - 1,
            cursor_moves: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.present.get(i).copied().unwrap_or(false)
    }

    pub fn key(&self, i: usize) -> Option<usize> {
        self.contains(i).then(|| self.keys[i] as usize)
    }

    /// Buckets the cursor has stepped over so far.
    pub fn cursor_moves(&self) -> u64 {
        self.cursor_moves
    }

    pub fn insert(&mut self, i: usize, key: usize) -> Result<(), QueueError> {
        if i >= self.present.len() {
            return Err(QueueError::IndexOutOfRange {
                index: i,
                capacity: self.present.len(),
            });
        }
        if key >= self.heads.len() {
            return Err(QueueError::KeyOutOfRange {
                key,
                num_keys: self.heads.len(),
            });
        }
        if key > self.cursor {
            return Err(QueueError::KeyAboveMax {
                key,
                max: self.cursor,
            });
        }
        if self.present[i] {
            return Err(QueueError::AlreadyPresent(i));
        }
        self.link(i, key);
        self.present[i] = true;
        self.len += 1;
        Ok(())
    }

    /// An element of the highest nonempty bucket with its key.
    pub fn find_max(&mut self) -> Option<(usize, usize)> {
        if self.len == 0 {
            return None;
        }
        while self.heads[self.cursor] == NIL {
            self.cursor -= 1;
            self.cursor_moves += 1;
        }
        Some((self.heads[self.cursor] as usize, self.cursor))
    }

    /// Moves `i` to a smaller key. Equal keys are a no-op.
    pub fn decrease_key(&mut self, i: usize, new_key: usize) -> Result<(), QueueError> {
        let current = self.key(i).ok_or(QueueError::Missing(i))?;
        if new_key > current {
            return Err(QueueError::IncreaseKey {
                index: i,
                current,
                requested: new_key,
            });
        }
        if new_key < current {
            self.unlink(i);
            self.link(i, new_key);
        }
        Ok(())
    }

    pub fn delete(&mut self, i: usize) -> Result<(), QueueError> {
        if !self.contains(i) {
            return Err(QueueError::Missing(i));
        }
        self.unlink(i);
        self.present[i] = false;
        self.len -= 1;
        Ok(())
    }

    fn link(&mut self, i: usize, key: usize) {
        let head = self.heads[key];
        self.next[i] = head;
        self.prev[i] = NIL;
        if head != NIL {
            self.prev[head as usize] = i as u32;
        }
        self.heads[key] = i as u32;
        self.keys[i] = key as u32;
    }

    fn unlink(&mut self, i: usize) {
        let (p, n) = (self.prev[i], self.next[i]);
        if p == NIL {
            self.heads[self.keys[i] as usize] = n;
        } else {
            self.next[p as usize] = n;
        }
        if n != NIL {
            self.prev[n as usize] = p;
        }
    }
}
