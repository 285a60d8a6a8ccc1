# alternating chain started from a 0.3 coin
st(0.3) ; chain(not)
