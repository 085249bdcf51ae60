from ortools.sat.python import cp_model


def generate_model(c, k):
    """Build a CP-SAT model whose solutions are the base-k solutions of ``c``.

    The addition is posted column by column with explicit carries so that no
    coefficient grows with the length of the terms.

    Returns:
        (letter_vars, model): ``letter_vars`` maps each letter to its digit
        variable.
    """
    model = cp_model.CpModel()

    letters = sorted(set(''.join(c.terms)))

    letter_vars = {}
    for ch in letters:
        letter_vars[ch] = model.NewIntVar(0, k - 1, f'digit-{ch}')

    model.AddAllDifferent(list(letter_vars.values()))

    # no term may start with a zero
    for term in c.terms:
        model.Add(letter_vars[term[0]] >= 1)

    w1, w2, w3 = c.terms
    carry_in = 0
    for j in range(1, c.size + 1):
        carry_out = model.NewBoolVar(f'carry-{j}')

        lhs = carry_in
        for term in (w1, w2):
            if j <= len(term):
                lhs += letter_vars[term[-j]]

        digit = letter_vars[w3[-j]] if j <= len(w3) else 0
        model.Add(lhs == digit + k * carry_out)

        carry_in = carry_out

    model.Add(carry_in == 0)

    return letter_vars, model
