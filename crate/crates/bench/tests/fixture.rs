use dualprune_bench::fixture_log;

#[test]
fn fixture_builds_at_bench_sizes() {
    for n in [1_000, 10_000] {
        let log = fixture_log(n, 30);
        assert_eq!((log.n(), log.t_max()), (n, 30));
        assert_eq!(
            log.noise_flags().unwrap().iter().filter(|&&f| f).count(),
            n / 10
        );
    }
}
