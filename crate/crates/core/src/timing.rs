use std::time::Duration;

/// Wall-clock stopwatch. Browsers have no `Instant`, so on wasm32 it reads
/// nothing and callers fall back to zero.
pub(crate) struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub fn elapsed(&self) -> Option<Duration> {
        #[cfg(not(target_arch = "wasm32"))]
        return Some(self.start.elapsed());
        #[cfg(target_arch = "wasm32")]
        None
    }
}
