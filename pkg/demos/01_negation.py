# %% [markdown]
# Removing negation from a recursive schema
#
# Here x says: if the value is an object, its member "a" must NOT satisfy x.
# Depth decides membership, so a number is in, {a: 1} is out, {a: {a: 1}} is in.

# %%
from schemalg import regex as rx
from schemalg.algebra import Environment, Not, Prop, Ref, show_env, validate
from schemalg.json_model import parse_json
from schemalg.negation import eliminate_not
from schemalg.normalizer import normalize

env = Environment({"x": Prop(rx.literal("a"), Not(Ref("x")))}, "x")
print(show_env(env))

# %% [markdown]
# Not-elimination adds a complement variable for x and pushes every
# negation down to the leaves.

# %%
no_not = eliminate_not(env)
print(show_env(no_not))

# %%
for text in ["1", '{"a":1}', '{"a":{"a":1}}', '{"a":{"a":{"a":1}}}', '{"a":{"a":{"a":{"a":1}}}}']:
    v = parse_json(text)
    print(f"{text:28} original={validate(v, env)!s:5}  negation-free={validate(v, no_not)}")

# %% [markdown]
# The full pipeline ends with one disjunction of prepared groups per variable.

# %%
prepared = normalize(env)
print(show_env(prepared))
