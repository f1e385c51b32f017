# %% [markdown]
# Preparing an object group
#
# Properties ^a and ^.b overlap, and two requirements (a member matching ^.d,
# a member matching ^a whose value is x3) may or may not be met by the same
# member. Preparation splits names into disjoint regions and splits each
# requirement into alternatives that are either identical or incompatible.

# %%
from schemalg import regex as rx
from schemalg.algebra import TRUE, Environment, Group, PattReq, Prop, Ref, show
from schemalg.json_model import Kind
from schemalg.negation import eliminate_not
from schemalg.normalizer import VarFactory
from schemalg.preparation import check_object_invariants, choice_sets, prepare_object

P = rx.parse_pattern
env = eliminate_not(Environment({
    "x": Group(Kind.OBJ, ()), "x1": Group(Kind.NUM, ()),
    "x2": Group(Kind.STR, ()), "x3": Group(Kind.NULL, ()),
}, "x"))
factory = VarFactory(env)
group = Group(Kind.OBJ, (
    Prop(P("^a"), Ref("x1")), Prop(P("^.b"), Ref("x2")),
    PattReq(P("^.d"), TRUE), PattReq(P("^a"), Ref("x3")),
))
prepared = prepare_object(group, factory)

# %%
print("regions:")
for r, x in prepared.constraining:
    print(f"  {rx.to_text(r):20} -> {show(x)}")
print("requirements:")
for q in prepared.requiring:
    print("  " + show(q))

# %% [markdown]
# The regions cover every name, including short ones such as "" and "a".
# A region like "a followed by a non-b" would leave "a" itself unconstrained.

# %%
for name in ["", "a", "b", "ab", "ax", "xb", "xy"]:
    hits = [rx.to_text(r) for r, _ in prepared.constraining if rx.matches(r, name)]
    print(f"{name!r:5} in {hits}")

# %%
print(check_object_invariants(prepared, factory))
for chosen in choice_sets(prepared):
    print(sorted(f"{rx.to_text(r)}:{show(y)}" for r, y in chosen))
