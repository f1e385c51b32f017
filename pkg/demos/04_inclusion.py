# %% [markdown]
# Inclusion and equivalence of JSON Schema documents
#
# S1 is included in S2 when S1 and not S2 has no witness; a witness of the
# difference is a counterexample.

# %%
from schemalg.frontend import translate
from schemalg.json_model import serialize_json
from schemalg.witness import check_equivalence, check_inclusion, witness

integer = translate({"type": "integer"})
number = translate({"type": "number"})
print("integer in number:", check_inclusion(integer, number).included)
res = check_inclusion(number, integer)
print("number in integer:", res.included, "counterexample", serialize_json(res.counterexample))

# %%
closed = translate({"type": "object", "properties": {"a": {"type": "string"}}, "additionalProperties": False})
open_ = translate({"type": "object", "properties": {"a": {"type": "string"}}})
res = check_inclusion(open_, closed)
print("open in closed:", res.included, serialize_json(res.counterexample))

# %%
a = translate({"type": "array", "items": {"type": "number"}, "contains": {"multipleOf": 2}})
b = translate({"type": "array", "items": {"type": "number"}, "not": {"items": {"not": {"multipleOf": 2}}}})
res = check_equivalence(a, b)
print("equivalent:", res.equivalent, res.direction, serialize_json(res.counterexample))

# %% [markdown]
# Satisfiability with recursion. t is a string of length 3 or more, or a
# non-empty array of t. Ruling out strings at the top level gives an array.

# %%
tree = {"anyOf": [
    {"type": "string", "minLength": 3},
    {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/t"}},
]}
doc = {"definitions": {"t": tree}, "allOf": [{"$ref": "#/definitions/t"}, {"not": {"type": "string"}}]}
print(serialize_json(witness(translate(doc)).witness))

# %% [markdown]
# Forbidding strings at every level leaves only infinitely deep arrays,
# so there is no instance.

# %%
no_strings = {"anyOf": [
    {"type": "string", "minLength": 3},
    {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/t"},
     "not": {"contains": {"type": "string"}}},
]}
out = witness(translate({"definitions": {"t": no_strings}, "allOf": [{"$ref": "#/definitions/t"}, {"type": "array"}]}))
print("satisfiable:", out.satisfiable)
