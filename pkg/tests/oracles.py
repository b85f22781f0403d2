"""Reference values from closed forms, evaluated in mpmath at 30 digits and frozen here."""

# (pi n +- pi/6)^2, ascending
TWISTED_FIRST_10 = [
    0.27415567780803773941, 6.8538919452009434853, 13.433628212593849231,
    33.172837014772566469, 46.332309549558377961, 79.23099088652290669,
    98.970199688701623928, 145.02835356045196415, 171.34729863002358713,
    230.56492503655973885,
]

# Dirichlet, V = [[1, i/2], [-i/2, 2]]: pi^2 n^2 + eig(V), eig(V) = 3/2 -+ 1/sqrt(2)
DIRICHLET_MATRIX_FIRST_5 = [
    10.662497619902811094, 12.076711182275906143, 40.271310823170886951,
    41.685524385543982, 89.619332828617680045,
]

# commuting3: NN series pi^2 m^2, doubled ND/DN series pi^2 (m + 1/2)^2
COMMUTING3_FIRST_6 = [
    0.0, 2.4674011002723396547, 2.4674011002723396547, 9.8696044010893586188,
    22.206609902451056892, 22.206609902451056892,
]

# -sqrt(lam) cot sqrt(lam) at lam = -1, i.e. -coth 1
M_DIRICHLET_AT_MINUS_1 = -1.3130352854993313036
# V = 0.3, lam = 2: -sqrt(1.7) cot sqrt(1.7)
M_DIRICHLET_V03_AT_2 = -0.35657894050690251042
# det W(-1) = -sinh(1) for N = 1 Dirichlet, V = 0
DET_W_DIRICHLET_AT_MINUS_1 = -1.1752011936438014569

# three-point Dirichlet Laplacian at h = 1/2000: (4/h^2) sin^2(n pi h / 2)
FD_DIRICHLET_H2000 = [
    9.8696023717334623183, 39.478385134671105241, 88.826275232084783462,
    157.91315090296121061, 246.73884168230239245,
]

# psi'(0) = psi(0), psi(1) = 0: roots of k cos k + sin k = 0, squared
ROBIN_DIRICHLET_FIRST_2 = [4.1158583656945228373, 24.139342030445556788]
