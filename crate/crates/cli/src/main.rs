fn main() {
    if let Some(n) = std::env::var("SIFRAMES_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    std::process::exit(siframes::main_with_args(std::env::args_os()));
}
