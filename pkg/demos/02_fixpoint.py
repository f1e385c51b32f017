# %% [markdown]
# Witness search as a fixpoint
#
# Each pass re-evaluates the variables that are still Open, using the states
# of the previous pass. A variable becomes Populated (with a value) or Empty,
# and never changes again.

# %%
from schemalg import regex as rx
from schemalg.algebra import INF, TRUE, Environment, Group, Or, OrPattReq, PreparedObject, Ref
from schemalg.json_model import Kind, serialize_json
from schemalg.witness import is_populated, run_fixpoint


def obj(*requirements, hi=INF):
    reqs = tuple(OrPattReq(tuple((rx.literal(n), Ref(v)) for n, v in alts)) for alts in requirements)
    return PreparedObject(0, hi, ((rx.UNIVERSAL, TRUE),), reqs)


def show_trace(out):
    names = list(out.trace[0])
    for i, states in enumerate(out.trace):
        cells = []
        for n in names:
            st = states[n]
            shown = serialize_json(st.value) if is_populated(st) else repr(st)
            cells.append(f"{n}={shown}")
        print(f"pass {i}: " + "  ".join(cells))


# %%
env = Environment({
    "x": Or((obj([("a", "l"), ("b", "y")]),)),
    "y": Or((obj([("a", "z"), ("b", "k")], [("c", "m")]),)),
    "k": Or((obj([("a", "l")]),)),
    "l": Or((obj([("a", "x")], hi=0),)),
    "z": Or((obj([("a", "x")]), Group(Kind.NULL, ()))),
    "m": Or((Group(Kind.NUM, ()),)),
}, "x")
out = run_fixpoint(env)
show_trace(out)
print("witness:", serialize_json(out.witness))

# %% [markdown]
# l can have no members yet must have "a", so it is Empty at once; k only
# asks for an l, so it follows on the next pass. When x and y only wait on
# each other, nothing changes after z is found and both end up Empty.

# %%
env = Environment({
    "x": Or((obj([("a", "y")]),)),
    "y": Or((obj([("a", "z")], [("b", "x")]),)),
    "z": Or((obj([("a", "y")]), Group(Kind.NUM, ()))),
}, "x")
out = run_fixpoint(env)
show_trace(out)
print("final:", out.states, "satisfiable:", out.satisfiable)
