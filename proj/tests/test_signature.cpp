#include <gtest/gtest.h>

#include "cqlkit/parser.hpp"
#include "cqlkit/signature.hpp"

namespace cqlkit {

bool operator==(const SignedNode& a, const SignedNode& b) {
  return a.signature == b.signature && a.is_leaf == b.is_leaf && a.depth == b.depth;
}

namespace {

std::vector<std::string> rendered(std::string_view src, bool non_leaf_only = false) {
  std::vector<std::string> out;
  for (const auto& n : signature_nodes(parse(src))) {
    if (!non_leaf_only || !n.is_leaf) out.push_back(to_string(n.signature));
  }
  return out;
}

TEST(Signature, EmptyToken) {
  auto nodes = signature_nodes(parse("[]"));
  ASSERT_EQ(nodes.size(), 4u);
  EXPECT_EQ(nodes[0].signature.kind, "Query");
  EXPECT_EQ(nodes[1].signature.kind, "Seq");
  EXPECT_EQ(nodes[2].signature.kind, "Token");
  EXPECT_EQ(nodes[3].signature.kind, "Empty");
  EXPECT_FALSE(nodes[2].is_leaf);
  EXPECT_TRUE(nodes[3].is_leaf);
}

TEST(Signature, SingleAtomNonLeafCount) {
  EXPECT_EQ(rendered(R"([word="a"])", true),
            (std::vector<std::string>{"Query(Seq)", "Seq(Token)", "Token(Atom)[{1,1}]"}));
}

TEST(Signature, FullWalk) {
  EXPECT_EQ(rendered(R"(A:[word="a" | !pos="N.*"] B:[] within <s/> :: A.pos != B.pos)"),
            (std::vector<std::string>{
                "Query(Seq,Within,Condition)",
                "Seq(Token,Token)",
                "Token(Or)[A:{1,1}]",
                "Or(Atom,Not)[|]",
                "Atom()[word=\"a\"]",
                "Not(Atom)[!]",
                "Atom()[pos=\"N.*\"]",
                "Token(Empty)[B:{1,1}]",
                "Empty()",
                "Within(Struct)",
                "Struct()[s]",
                "Condition()[A.pos!=B.pos]",
            }));
}

TEST(Signature, RenamedLabelsDifferOnlyInKeys) {
  auto a = signature_nodes(parse("1:[] 2:[] :: 1.pos = 2.pos"));
  auto b = signature_nodes(parse("x:[] y:[] :: x.pos = y.pos"));
  ASSERT_EQ(a.size(), b.size());
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].signature.kind, b[i].signature.kind);
    EXPECT_EQ(a[i].signature.child_kinds, b[i].signature.child_kinds);
    if (a[i].signature.key != b[i].signature.key) ++differing;
  }
  // two labeled tokens and the condition
  EXPECT_EQ(differing, 3u);
}

TEST(Signature, NonLeafCountIsNodesMinusLeaves) {
  for (const char* src : {"[]", R"([pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"])",
                          "A:[] []? B:[] within <s/> :: A.pos = B.pos", "[(word='a'|word='b')&pos='c']"}) {
    auto nodes = signature_nodes(parse(src));
    auto shape = ast_shape(parse(src));
    std::size_t non_leaf = 0;
    for (const auto& n : nodes) non_leaf += n.is_leaf ? 0 : 1;
    EXPECT_EQ(non_leaf, shape.node_count - shape.leaf_count) << src;
    EXPECT_EQ(signature_nodes(parse(src)), nodes);
  }
}

TEST(Signature, Shape) {
  auto s = ast_shape(parse(R"([pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"])"));
  EXPECT_EQ(s.token_expr_count, 4u);
  EXPECT_EQ(s.atom_count, 3u);
  EXPECT_EQ(s.depth, 5u);  // Query > Within > Seq > Token > Atom
  EXPECT_EQ(s.node_count, 12u);
  EXPECT_EQ(s.leaf_count, 4u);
}

}  // namespace
}  // namespace cqlkit
