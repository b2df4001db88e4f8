import pmf


def test_eisenstein_coefficients():
    chi = pmf.character("3:quad")
    assert chi.order == 2 and chi.parity == -1
    g = pmf.eisenstein(1, chi, 8)
    assert g.coeff(0) == "[1/3,0]"
    assert g.coeff(1) == "[2,0]"
    assert g.coeff(3) == "[2,0]"
    assert g.weight == 1


def test_operator_identity():
    chi = pmf.character("3:quad")
    g = pmf.eisenstein(3, chi, 20, flavor="residue", p=5, M=6)
    assert pmf.atkin_u(pmf.frob(g, 5), 5).agrees_with(g)
    assert pmf.ell2_apply(g, 3, 5).is_zero()


def test_stabilized_form_in_atkin_kernel():
    chi = pmf.character("3:quad")
    g = pmf.eisenstein(1, chi, 30, flavor="rational")
    s = pmf.p_stabilize(g, 1, 5)
    passed, first_fail, checked = pmf.kernel_check_atkin(s, 5, 6, 0)
    assert passed and checked > 0


def test_moment_and_kummer():
    chi = pmf.character("3:quad")
    rep = pmf.kummer_units("mu", chi, 5, 4, 10, 2, 6)
    assert rep["pass"] and rep["pairs"] > 0
    assert pmf.moment("jtilde", chi, 5, 4, 10, 0, 2).is_zero()


def test_json_round_trip():
    chi = pmf.character("3:quad")
    g = pmf.eisenstein(1, chi, 8)
    h = pmf.form_from_json(g.to_json())
    assert h.agrees_with(g)


def test_verify_small_config():
    chi = pmf.character("3:quad")
    rep = pmf.verify(chi, 5, [2], K=6, Q=12, M=4, r_max=1)
    assert rep["overall"]
    # moment 2 pairs with moment 6 in the Kummer check at K = 6, p = 5
    rep_bad = pmf.verify(chi, 5, [2], K=6, Q=12, M=4, r_max=1, inject_k=2, inject_q=0)
    assert not rep_bad["overall"]
