//! Size guards for the dense paths, overridable through `WHT_MAX_N`.

use std::sync::OnceLock;

/// Default largest `n` evaluated by the dense oracle (`2^28` entries).
pub const ORACLE_MAX_N: usize = 14;
/// Default largest `n` accepted by the dataflow export.
pub const EXPORT_MAX_N: usize = 6;

/// Name of the environment variable overriding both guards.
pub const MAX_N_ENV: &str = "WHT_MAX_N";

fn env_override() -> Option<usize> {
    static CELL: OnceLock<Option<usize>> = OnceLock::new();
    *CELL.get_or_init(|| {
        let raw = std::env::var(MAX_N_ENV).ok()?;
        match raw.trim().parse() {
            Ok(v) => Some(v),
            Err(_) => {
                log::warn!("ignoring unparsable {MAX_N_ENV}={raw:?}");
                None
            }
        }
    })
}

pub fn oracle_max_n() -> usize {
    env_override().unwrap_or(ORACLE_MAX_N)
}

pub fn export_max_n() -> usize {
    env_override().unwrap_or(EXPORT_MAX_N)
}
