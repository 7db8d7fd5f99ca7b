from linfact import (
    EnsembleSpec, MatPoly, absorb_scalars, evaluate, factor, operator_norm,
    parse_word,
)

p = MatPoly.from_terms(1, 1, [
    (parse_word("x1 x2"), [[1]]),
    (parse_word("x2* x1*"), [[1]]),
])
print(p)  # "[[1.+0.j]] ⊗ x1 x2 + [[1.+0.j]] ⊗ x2* x1*"

f = factor(p)
print(f.m)  # 2
print(f.verify(p))  # 0.0

chain = absorb_scalars(f)
print([q.degree() for q in chain])  # [1, 1]

rep = EnsembleSpec("haar", 200, 2, seed=0).sample(0)
print(operator_norm(evaluate(p, rep)).value)  # close to 2
