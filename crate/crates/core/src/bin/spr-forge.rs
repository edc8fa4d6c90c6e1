use std::io::Write;

fn main() {
    let out = spr_forge::cli::run(std::env::args_os());
    // A closed pipe on the reader's side is not worth a panic.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
