import pytest

from fmwb.cli import main, read_structure
from fmwb.core import Structure, Vocabulary, encode_bin
from fmwb.machines import format_machine, identity_machine


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text if text.endswith("\n") else text + "\n")
        return str(path)

    return write, tmp_path


def test_mc_exit_codes(files, capsys):
    write, _ = files
    struct = write("c2.struct", "vocab E:2\nn = 2\nE = (0,1) (1,0)")
    sent = write("edge.sent", "Ex Ey E(x,y)")
    nosent = write("noedge.sent", "Ax Ay ~E(x,y)")
    assert main(["mc", struct, sent]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert main(["mc", struct, nosent]) == 1
    assert capsys.readouterr().out.strip() == "false"


def test_parse_errors_exit_2(files, capsys):
    write, _ = files
    struct = write("c2.struct", "vocab E:2\nn = 2\nE = (0,1)")
    bad = write("bad.sent", "Ex R(x")
    assert main(["mc", struct, bad]) == 2
    assert "fmwb:" in capsys.readouterr().err


def test_enc_dec_roundtrip(files, capsys):
    write, tmp = files
    struct = write("a.struct", "vocab R:1 <\nn = 3\nR = (1)")
    emitted = str(tmp / "bits.txt")
    assert main(["enc", struct, "--emit", emitted]) == 0
    assert capsys.readouterr().out.strip() == "010"
    decoded = str(tmp / "back.struct")
    assert main(["dec", emitted, "--tau", "R:1 <", "--emit", decoded]) == 0
    capsys.readouterr()
    assert read_structure(decoded) == read_structure(struct)


def test_benc_uenc_reconstruct(files, capsys):
    write, tmp = files
    struct = write("m.struct", "vocab R:1\nn = 2\nR = (0)")
    bits = str(tmp / "benc.txt")
    assert main(["benc", struct, "--emit", bits]) == 0
    assert capsys.readouterr().out.strip() == "10101111011"
    assert main(["uenc-len", struct]) == 0
    assert capsys.readouterr().out.strip() == "1403"
    assert main(["reconstruct", bits, "--tau", "R:1"]) == 0
    out = capsys.readouterr().out
    assert "n = 2" in out and "R = (1)" in out


def test_iso_and_canon(files, capsys):
    write, _ = files
    a = write("a.struct", "vocab R:1\nn = 2\nR = (0)")
    b = write("b.struct", "vocab R:1\nn = 2\nR = (1)")
    c = write("c.struct", "vocab R:1\nn = 2\nR =")
    assert main(["iso", a, b]) == 0
    capsys.readouterr()
    assert main(["iso", a, c]) == 1
    capsys.readouterr()
    assert main(["canon", a]) == 0
    assert "R = (1)" in capsys.readouterr().out


def test_op_apply(files, capsys):
    write, _ = files
    ups = write("u.sent", "Ex R(x)")
    assert main(["op-apply", ups, "--which", "ord", "--tau", "E:2 <"]) == 0
    assert capsys.readouterr().out.strip() == "Ex Ey1 E(y1,x)"
    ups2 = write("u2.sent", "Ex Ey R(x,y)")
    assert main(["op-apply", ups2, "--which", "unord", "--tau", "H:3"]) == 0
    assert capsys.readouterr().out.strip() == "Ex Ey Ez1 H(x,y,z1)"
    assert main(["op-apply", ups2, "--which", "unord", "--tau", "P:1"]) == 2


def test_psi_roundtrip(files, capsys):
    write, tmp = files
    emitted = str(tmp / "psi.sent")
    assert main(["psi", "encode", "101", "--emit", emitted]) == 0
    capsys.readouterr()
    assert main(["psi", "recognize", emitted]) == 0
    assert capsys.readouterr().out.strip() == "101"
    other = write("o.sent", "Ex1 x1 = x1")
    assert main(["psi", "recognize", other]) == 1


def test_tm_commands(files, capsys):
    write, tmp = files
    machine = write("id.tm", format_machine(identity_machine()))
    cyc = Structure.make(Vocabulary((("E", 2),)), 2, {"E": [(0, 1), (1, 0)]})
    word = write("in.bits", encode_bin(cyc))
    edge = write("edge.sent", "Ex Ey E(x,y)")
    assert main(["tm", "run", machine, "--input", word, "--oracle", edge,
                 "--tau", "E:2"]) == 0
    assert capsys.readouterr().out.strip() == "accept"
    bits = str(tmp / "m.bits")
    assert main(["tm", "encode", machine, "--emit", bits]) == 0
    capsys.readouterr()
    assert main(["tm", "decode", bits]) == 0
    assert "kind polytime" in capsys.readouterr().out
    assert main(["tm", "check-reduction", machine, "--gamma", edge,
                 "--target", edge, "--tau", "E:2", "--nmax", "3"]) == 0
    capsys.readouterr()


def test_cfg_commands(files, capsys):
    write, _ = files
    grammar = write("g.cfg", "S -> a S b | eps")
    assert main(["cfg", "member", grammar, "aabb"]) == 0
    capsys.readouterr()
    assert main(["cfg", "member", grammar, "eps"]) == 0
    capsys.readouterr()
    assert main(["cfg", "member", grammar, "aab"]) == 1
    capsys.readouterr()
    assert main(["cfg", "missing", grammar, "--lenmax", "3"]) == 1
    assert capsys.readouterr().out.strip() == "a"


def test_charset_and_form_commands(files, capsys):
    write, tmp = files
    struct = write("a.struct", "vocab R1:1 <\nn = 2\nR1 = (0)")
    ups = write("ups.sent", "Ex R(x)")
    gamma = write("gamma.sent", "Ex R1(x)")
    machine = write("id.tm", format_machine(identity_machine()))
    assert main(["charset", "member", "--kind", "ord", "--struct", struct,
                 "--gamma", gamma, "--machine", machine,
                 "--upsilon", ups]) == 0
    capsys.readouterr()
    built = str(tmp / "form.sent")
    assert main(["form", "build", "--kind", "ord5", "--tau", "R1:1 <",
                 "--gamma", gamma, "--machine", machine, "--upsilon", ups,
                 "--class", "NP", "--emit", built]) == 0
    capsys.readouterr()
    assert main(["form", "recognize", built, "--kind", "ord5", "--tau",
                 "R1:1 <", "--upsilon", ups, "--class", "NP"]) == 0
    out = capsys.readouterr().out
    assert "gamma: Ex R1(x)" in out
    other = write("bad.sent", "Ex R1(x)")
    assert main(["form", "recognize", other, "--kind", "ord5", "--tau",
                 "R1:1 <", "--upsilon", ups, "--class", "NP"]) == 1
    capsys.readouterr()
    assert main(["form", "enumerate", "--kind", "npconp8", "--tau", "P:1",
                 "--budget", "5"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 5


def test_config_file_resolution(files, capsys):
    write, _ = files
    ups = write("ups.sent", "Ex R(x)")
    config = write("classes.cfg", f"NP = {ups}")
    struct = write("a.struct", "vocab R1:1 <\nn = 2\nR1 = (0)")
    gamma = write("gamma.sent", "Ex R1(x)")
    machine = write("id.tm", format_machine(identity_machine()))
    assert main(["charset", "member", "--kind", "ord", "--struct", struct,
                 "--gamma", gamma, "--machine", machine,
                 "--config", config, "--class", "NP"]) == 0
    capsys.readouterr()
    assert main(["charset", "member", "--kind", "ord", "--struct", struct,
                 "--gamma", gamma, "--machine", machine,
                 "--config", config, "--class", "P"]) == 2


def test_valid_and_modeq(files, capsys):
    write, _ = files
    taut = write("t.sent", "Ax x = x")
    exists_p = write("p.sent", "Ex P(x)")
    not_all_not = write("q.sent", "~Ax ~P(x)")
    assert main(["valid-upto", taut, "--tau", "P:1", "--nmax", "3"]) == 0
    capsys.readouterr()
    assert main(["valid-upto", exists_p, "--tau", "P:1", "--nmax", "3"]) == 1
    capsys.readouterr()
    assert main(["modeq-upto", exists_p, not_all_not, "--tau", "P:1",
                 "--nmax", "4"]) == 0
    capsys.readouterr()
    assert main(["modeq-upto", exists_p, taut, "--tau", "P:1",
                 "--nmax", "3", "--jobs", "2"]) == 1
    assert "disagreement" in capsys.readouterr().out


def test_valid_upto_parallel_path(files, capsys):
    write, _ = files
    taut = write("t.sent", "Ax Ey (x = y | x != y)")
    assert main(["valid-upto", taut, "--tau", "E:2", "--nmax", "4",
                 "--jobs", "2"]) == 0
    assert "valid up to n = 4" in capsys.readouterr().out


def test_missing_option_combinations_exit_2(files, capsys):
    write, _ = files
    machine = write("id.tm", format_machine(identity_machine()))
    assert main(["tm", "run", machine]) == 2
    assert main(["form", "build", "--kind", "ord5", "--tau", "R1:1 <"]) == 2
    grammar = write("g.cfg", "S -> a S b | eps")
    assert main(["cfg", "member", grammar]) == 2
    capsys.readouterr()


def test_structure_text_roundtrip(tmp_path):
    import random

    from fmwb.core import parse_vocab
    from randgen import random_structure

    rng = random.Random(71)
    for text in ("E:2", "R:1 <", "P:1 Q:1", "H:3"):
        vocab = parse_vocab(text)
        for _ in range(10):
            a = random_structure(rng, vocab, rng.randint(2, 4))
            path = tmp_path / "s.struct"
            path.write_text(str(a) + "\n")
            assert read_structure(str(path)) == a


def test_mc_evaluates_characteristic_leaves(files, capsys):
    write, tmp = files
    ups = write("ups.sent", "Ex R(x)")
    gamma = write("gamma.sent", "Ex R1(x)")
    machine = write("id.tm", format_machine(identity_machine()))
    struct = write("a.struct", "vocab R1:1 <\nn = 2\nR1 = (0)")
    built = str(tmp / "form.sent")
    assert main(["form", "build", "--kind", "ord5", "--tau", "R1:1 <",
                 "--gamma", gamma, "--machine", machine, "--upsilon", ups,
                 "--class", "NP", "--emit", built]) == 0
    capsys.readouterr()
    assert main(["mc", struct, built, "--upsilon", ups]) == 0
    assert capsys.readouterr().out.strip() == "true"
    # without the distinguished sentence the leaf is unresolvable
    assert main(["mc", struct, built]) == 2
