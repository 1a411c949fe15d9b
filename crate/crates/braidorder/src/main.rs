use std::process::exit;

fn main() {
    exit(braidorder::cli::run());
}
