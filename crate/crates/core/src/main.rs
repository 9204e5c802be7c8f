use std::io;

fn main() {
    let args = std::env::args_os().collect();
    let code = psk_keyrate::cli::run(args, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
