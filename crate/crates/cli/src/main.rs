use clap::Parser;
use legendre_cli::{execute, Cli, RunConfig, MAX_DOUBLINGS_ENV};

fn main() {
    let cli = Cli::parse();
    let env = std::env::var(MAX_DOUBLINGS_ENV).ok();
    let code = match RunConfig::from_cli(cli, env.as_deref()) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            eprintln!("legendre: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
