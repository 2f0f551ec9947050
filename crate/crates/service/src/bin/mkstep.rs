use clap::Parser;
use mkstep_service::cli::{execute, serve, Cli, Command, EXIT_INTERNAL};

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Serve { port, session_ttl } => {
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            match rt.block_on(serve(port, session_ttl)) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("serve: {e}");
                    EXIT_INTERNAL
                }
            }
        }
        cmd => execute(&cmd, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()),
    };
    std::process::exit(code);
}
