//! Log-stream vocabulary: object ids, actions and events.

use std::fmt;

use crate::error::{Error, Result};

/// Signed net count of one object. Removals may drive it below zero.
pub type Frequency = i64;

/// Identifier of a tracked object, 1-based.
///
/// Validity against a particular universe size `m` is checked by the
/// structure that consumes the id, not at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct ObjectId(u32);

impl ObjectId {
    /// Wraps a 1-based id. Zero is rejected.
    pub fn new(id: u32) -> Result<Self> {
        if id == 0 {
            return Err(Error::ObjectOutOfRange { id: 0, m: 0 });
        }
        Ok(ObjectId(id))
    }

    /// Id from a 0-based slot index.
    #[inline]
    pub(crate) fn from_index(index: usize) -> Self {
        ObjectId(index as u32 + 1)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// Checks `1 <= id <= m` and returns the 0-based index.
    #[inline]
    pub(crate) fn checked_index(self, m: usize) -> Result<usize> {
        let idx = self.index();
        if idx < m {
            Ok(idx)
        } else {
            Err(Error::ObjectOutOfRange {
                id: u64::from(self.0),
                m,
            })
        }
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u32> for ObjectId {
    type Error = Error;

    fn try_from(id: u32) -> Result<Self> {
        ObjectId::new(id)
    }
}

impl From<ObjectId> for u32 {
    fn from(id: ObjectId) -> u32 {
        id.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Add,
    Remove,
}

impl Action {
    /// The action that cancels this one.
    #[inline]
    pub fn opposite(self) -> Self {
        match self {
            Action::Add => Action::Remove,
            Action::Remove => Action::Add,
        }
    }

    #[inline]
    pub fn delta(self) -> Frequency {
        match self {
            Action::Add => 1,
            Action::Remove => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Action::Add => '+',
            Action::Remove => '-',
        }
    }
}

/// One `(object, action)` tuple of a log stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogEvent {
    pub object: ObjectId,
    pub action: Action,
}

impl LogEvent {
    pub fn new(object: ObjectId, action: Action) -> Self {
        LogEvent { object, action }
    }

    pub fn add(id: u32) -> Result<Self> {
        Ok(LogEvent::new(ObjectId::new(id)?, Action::Add))
    }

    pub fn remove(id: u32) -> Result<Self> {
        Ok(LogEvent::new(ObjectId::new(id)?, Action::Remove))
    }

    /// The event that undoes this one.
    pub fn inverse(self) -> Self {
        LogEvent::new(self.object, self.action.opposite())
    }
}

impl fmt::Display for LogEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.object, self.action.symbol())
    }
}
