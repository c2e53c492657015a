use clap::Parser;
use pqcalc::cli::{run_cli, CliRequest};

fn main() {
    let request = match CliRequest::try_parse() {
        Ok(request) => request,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let output = run_cli(&request);
    print!("{}", output.stdout);
    eprint!("{}", output.stderr);
    std::process::exit(output.exit_code);
}
