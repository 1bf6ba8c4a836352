//! Count-based sliding window over the last `W` events.
//!
//! An event leaving the window is fed back with the opposite action, which
//! cancels its contribution in constant time.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::event::{Frequency, LogEvent, ObjectId};
use crate::profile::{ModeResult, Profiler};

#[derive(Debug, Clone)]
pub struct WindowedProfiler {
    inner: Profiler,
    buffer: VecDeque<LogEvent>,
    width: usize,
}

impl WindowedProfiler {
    pub fn new(m: usize, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::invalid("window width must be >= 1"));
        }
        Ok(WindowedProfiler {
            inner: Profiler::new(m)?,
            buffer: VecDeque::with_capacity(width),
            width,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Events currently inside the window, oldest first.
    pub fn contents(&self) -> impl ExactSizeIterator<Item = &LogEvent> + '_ {
        self.buffer.iter()
    }

    pub fn profiler(&self) -> &Profiler {
        &self.inner
    }

    pub fn push(&mut self, event: LogEvent) -> Result<()> {
        // Validate before evicting so a bad event leaves the window intact.
        event.object.checked_index(self.inner.m())?;
        if self.buffer.len() == self.width {
            let expired = self.buffer.pop_front().expect("full window");
            self.inner.apply(expired.inverse())?;
        }
        self.inner.apply(event)?;
        self.buffer.push_back(event);
        Ok(())
    }

    pub fn mode(&self) -> ModeResult {
        self.inner.mode()
    }

    pub fn min_objects(&self) -> ModeResult {
        self.inner.min_objects()
    }

    pub fn median(&self) -> (Frequency, ObjectId) {
        self.inner.median()
    }

    pub fn top_k_objects(&self, k: usize) -> Result<Vec<(ObjectId, Frequency)>> {
        self.inner.top_k_objects(k)
    }

    pub fn frequency(&self, x: ObjectId) -> Result<Frequency> {
        self.inner.frequency(x)
    }

    pub fn histogram(&self) -> Vec<(Frequency, usize)> {
        self.inner.histogram()
    }
}
