use std::io::Write;

fn main() {
    let (out, err, code) = ordrep_cli::commands::main_with(std::env::args_os());
    if !out.is_empty() {
        println!("{out}");
    }
    if !err.is_empty() {
        let _ = write!(std::io::stderr(), "{err}");
    }
    std::process::exit(code);
}
