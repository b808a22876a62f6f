//! Holds the acceptance gate in `tests/acceptance.rs`. The target lives in its
//! own package so the library suites run before it.
