use std::process::exit;

fn main() {
    if let Err(e) = seqrac::cli::run() {
        eprintln!("error: {e}");
        exit(e.exit_code());
    }
}
