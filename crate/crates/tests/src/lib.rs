//! Acceptance suite for the phigeo workspace; see `tests/acceptance.rs`.
