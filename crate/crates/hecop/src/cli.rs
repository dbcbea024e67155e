//! Command-line entry point (placeholder during bring-up).

pub fn run() -> i32 {
    0
}
