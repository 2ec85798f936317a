import rvline


def test_iterated_logarithm():
    assert rvline.log_star(1) == 0
    assert rvline.log_star(16) == 3
    assert rvline.log_star(17) == 4
    assert rvline.log_star(2 ** 65536) == 5
    assert rvline.tower(4) == 65536


def test_suffix_free_encoding_and_cv_choice():
    assert rvline.binary_rep(52) == "110100"
    assert rvline.encode_sf("101") == "00100110"
    assert rvline.int_val("00101") == 5
    assert rvline.cv_choice(5, 3) == 5
    assert rvline.cv_choice(3, 5) == 4
    assert 0 <= rvline.cv_choice(52, 0) <= 11


def test_colouring_runner():
    rows = rvline.run_local([2, 3], "path")
    assert rows == [(0, 52), (1, 53)]
    labels = [k * 37 + 2 for k in range(101)]
    cycle = rvline.run_local(labels, "cycle")
    for i, (colour, round_) in enumerate(cycle):
        neighbour = cycle[(i + 1) % len(cycle)][0]
        assert colour in (0, 1, 2)
        assert colour != neighbour
        assert round_ <= rvline.log_star(labels[i]) + 59


def test_phase_arithmetic():
    kappa = rvline.DEFAULT_KAPPA
    assert rvline.phase_length(1, 1, kappa) == 148 * kappa
    assert rvline.epoch_length(1, 1, kappa) == rvline.phase_length(1, 1, kappa)
    assert rvline.first_epochs(1, 1, kappa) == 148 * kappa
    assert rvline.s_string(2) == "110000111"
    assert rvline.i_crit(8) == 2
    assert rvline.d_crit(5) == 3


def test_rendezvous_canonical():
    result = rvline.run_rendezvous(
        "canon", generator="canonical", start_a=0, start_b=1, orient_b=1
    )
    assert result["met"]
    assert result["ok"]
    assert result["elapsed"] <= result["bound"] == 704


def test_rendezvous_known_distance_trace():
    result = rvline.run_rendezvous(
        "known-d",
        generator="random",
        seed=7,
        start_a=0,
        start_b=4,
        delay=3,
        capture_trace=True,
    )
    assert result["met"] and result["ok"]
    trace = result["trace"]
    assert trace[0][0] == 1
    prev_a, prev_b = None, None
    for _, pos_a, pos_b, _, _ in trace:
        if prev_a is not None:
            assert abs(pos_a - prev_a) <= 1
            assert abs(pos_b - prev_b) <= 1
        prev_a, prev_b = pos_a, pos_b
