//! Parsing user expressions and running the command front end in-process.

use pqcalc::cli::{eval_expr, parse_expr, run_cli, Bindings, CliRequest, Command};
use pqcalc::Bound;

fn main() {
    let e = parse_expr("ln(x)/(x^0.8 - x^0.4)").expect("valid expression");
    println!("parsed: {e}");
    println!("at 3: {:?}", eval_expr(&e, 3.0, &Bindings::default()));
    println!(
        "at 1: {:?}",
        eval_expr(&e, 1.0, &Bindings::default())
            .unwrap_err()
            .to_string()
    );
    println!("{}", parse_expr("2 +").unwrap_err());

    let mut request = CliRequest::new(Command::Integrate, "c", 0.8, 0.4);
    request.c = 5.0;
    request.a = Some(1.0);
    request.b = Some(Bound::Finite(4.0));
    let out = run_cli(&request);
    print!("{}", out.stdout);
    println!("exit {}", out.exit_code);

    request.json = true;
    print!("{}", run_cli(&request).stdout);

    let mut request = CliRequest::new(Command::Integrate, "1/(x^0.8 - x^0.4)", 0.8, 0.4);
    request.a = Some(1.0);
    request.b = Some(Bound::Finite(3.0));
    let out = run_cli(&request);
    print!("{}", out.stdout);
    println!("exit {}", out.exit_code);
}
