use std::io::Write;

fn main() {
    let (code, out, _) = tiltlab::cli::run(std::env::args_os());
    let mut stream: Box<dyn Write> = if code == tiltlab::cli::EXIT_PARSE || code == tiltlab::cli::EXIT_INTERNAL {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(out.as_bytes());
    std::process::exit(code);
}
