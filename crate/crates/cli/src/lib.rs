//! Library surface of the command-line front end, exposed so the
//! integration tests can drive the model loader and report rendering
//! directly.

pub mod commands;
pub mod model;
pub mod report;

#[derive(Debug)]
pub struct CliError {
    msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self { msg: msg.into() }
    }

    pub fn kernel(e: cartan_core::KernelError) -> Self {
        Self { msg: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.msg)
    }
}
