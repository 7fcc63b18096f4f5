use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = multfree_cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    let _ = out.flush();
    drop(out);
    std::process::exit(code);
}
