//! proofdesk HTTP service and command-line front end.

pub mod cli;
pub mod html;
pub mod http;
pub mod service;
