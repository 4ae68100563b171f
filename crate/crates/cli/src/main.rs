use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(design_sampler::cli::main_with(std::env::args_os()))
}
