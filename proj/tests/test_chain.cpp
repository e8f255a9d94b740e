#include <doctest.h>

#include "chcalc/chain.hpp"

using namespace chcalc;

TEST_CASE("chain reduction basics") {
    CHECK(reduce({Op::Q, Op::Q}).sign == 0);
    CHECK(reduce({Op::Gm, Op::Gm}).sign == 0);
    CHECK(reduce({Op::Gp, Op::Gp}).sign == 0);

    // Q Gm -> -Gm Q
    auto r = reduce({Op::Q, Op::Gm});
    CHECK(r.sign == -1);
    CHECK(r.chain.word == Word{Op::Gm, Op::Q});

    // Gp Gm -> -Gm Gp
    r = reduce({Op::Gp, Op::Gm});
    CHECK(r.sign == -1);
    CHECK(r.chain.word == Word{Op::Gm, Op::Gp});

    // QGpQ = Q, GpQGp = Gp
    CHECK(reduce({Op::Q, Op::Gp, Op::Q}).chain.word == Word{Op::Q});
    CHECK(reduce({Op::Gp, Op::Q, Op::Gp}).chain.word == Word{Op::Gp});

    // Pi0 kills neighbours, absorbs itself
    CHECK(reduce({Op::Q, Op::Pi0}).sign == 0);
    CHECK(reduce({Op::Pi0, Op::Gm}).sign == 0);
    CHECK(reduce({Op::Pi0, Op::Pi0}).chain.word == Word{Op::Pi0});

    // J pushes right with parity sign
    r = reduce({Op::J, Op::Q});
    CHECK(r.sign == -1);
    CHECK(r.chain.word == Word{Op::Q, Op::J});
    CHECK(reduce({Op::J, Op::J}).chain.is_id());
}

TEST_CASE("chain flip signs") {
    // flip([Q]) = -[Q]
    auto f = flip(Chain{{Op::Q}});
    CHECK(f.sign == -1);
    CHECK(f.chain.word == Word{Op::Q});
    // flip([Gm]) = +[Gm], flip([Gp]) = +[Gp]
    CHECK(flip(Chain{{Op::Gm}}).sign == 1);
    CHECK(flip(Chain{{Op::Gp}}).sign == 1);
    // flip([GmGp]) = +[GmGp]
    f = flip(chain_gmgp());
    CHECK(f.sign == 1);
    CHECK(f.chain.word == chain_gmgp().word);
    // flip([QGp]) = +[GpQ]
    f = flip(chain_qgp());
    CHECK(f.sign == 1);
    CHECK(f.chain.word == chain_gpq().word);
    // double flip is the identity
    for (const Chain& c : {chain_gmgp(), chain_qgp(), chain_gm(), chain_gp()}) {
        auto f1 = flip(c);
        auto f2 = flip(f1.chain);
        CHECK(f2.sign * f1.sign == 1);
        CHECK(f2.chain.word == c.word);
    }
}

TEST_CASE("chain tags") {
    CHECK(chain_from_tag("GmGp").has_value());
    CHECK(chain_from_tag("GmGp")->word == chain_gmgp().word);
    CHECK(chain_tag(chain_qgp()) == "QGp");
    CHECK(!chain_from_tag("bogus").has_value());
}
