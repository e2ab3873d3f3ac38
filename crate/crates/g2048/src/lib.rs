//! Std companion to `g2048-core`: JSON wire formats, ASCII rendering, the
//! `g2048` command line and the HTTP/WebSocket game service.

pub mod cli;
pub mod render;
pub mod service;
pub mod wire;
