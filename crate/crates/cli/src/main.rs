use clap::Parser;
use mxst_cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let requested_text = !e.use_stderr();
            e.print().ok();
            std::process::exit(if requested_text { 0 } else { 2 });
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
