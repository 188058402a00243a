"""Frozen high-precision reference values for the test suite.

Computed once with mpmath at 50 decimal digits and pinned here as
literals so the tests carry no extra dependency.  Regenerate only if
a formula under test changes meaning, never to make a test pass.
"""

# (u, P(N(0,1) > u)) on an even grid over [-8, 8]
NORMAL_TAIL = [
    (-8.0, 0.99999999999999938),
    (-7.673469387755102, 0.99999999999999163),
    (-7.3469387755102041, 0.9999999999998986),
    (-7.0204081632653061, 0.99999999999889389),
    (-6.6938775510204082, 0.99999999998913334),
    (-6.3673469387755102, 0.99999999990383709),
    (-6.0408163265306122, 0.99999999923331774),
    (-5.7142857142857143, 0.99999999449171145),
    (-5.3877551020408163, 0.99999996432841374),
    (-5.0612244897959184, 0.99999979171381284),
    (-4.7346938775510204, 0.99999890307014477),
    (-4.4081632653061224, 0.99999478745258663),
    (-4.0816326530612245, 0.99997763977939706),
    (-3.7551020408163265, 0.99991336456448424),
    (-3.4285714285714286, 0.99969661657718197),
    (-3.1020408163265306, 0.99903904271482623),
    (-2.7755102040816327, 0.99724424151113571),
    (-2.4489795918367347, 0.99283692174604225),
    (-2.1224489795918367, 0.98309997358353202),
    (-1.7959183673469388, 0.96374624957920911),
    (-1.4693877551020408, 0.92913617667595435),
    (-1.1428571428571429, 0.87345104552644222),
    (-0.8163265306122449, 0.79284329783333171),
    (-0.48979591836734694, 0.68786084036643602),
    (-0.16326530612244898, 0.56484522547683317),
    (0.16326530612244898, 0.43515477452316683),
    (0.48979591836734694, 0.31213915963356398),
    (0.8163265306122449, 0.20715670216666829),
    (1.1428571428571429, 0.12654895447355778),
    (1.4693877551020408, 0.070863823324045645),
    (1.7959183673469388, 0.036253750420790893),
    (2.1224489795918367, 0.016900026416467979),
    (2.4489795918367347, 0.0071630782539577517),
    (2.7755102040816327, 0.0027557584888642896),
    (3.1020408163265306, 0.00096095728517376811),
    (3.4285714285714286, 0.00030338342281803186),
    (3.7551020408163265, 8.6635435515763675e-5),
    (4.0816326530612245, 2.2360220602941678e-5),
    (4.4081632653061224, 5.2125474133705182e-6),
    (4.7346938775510204, 1.0969298552279875e-6),
    (5.0612244897959184, 2.0828618716089498e-7),
    (5.3877551020408163, 3.5671586260286496e-8),
    (5.7142857142857143, 5.5082885485197209e-9),
    (6.0408163265306122, 7.6668225502064243e-10),
    (6.3673469387755102, 9.6162907435522965e-11),
    (6.6938775510204082, 1.0866664812629337e-11),
    (7.0204081632653061, 1.1061051497814746e-12),
    (7.3469387755102041, 1.0139885040704663e-13),
    (7.673469387755102, 8.370274941652365e-15),
    (8.0, 6.2209605742717841e-16),
]

# (x, Gamma(x)) on (0, 10]
GAMMA_GRID = [
    (0.125, 7.5339415987976119),
    (0.33333333333333333, 2.6789385347077476),
    (0.5, 1.772453850905516),
    (0.75, 1.2254167024651776),
    (1.0, 1.0),
    (1.25, 0.90640247705547708),
    (1.5, 0.88622692545275801),
    (2.0, 1.0),
    (2.5, 1.329340388179137),
    (3.0, 2.0),
    (3.5, 3.3233509704478426),
    (4.0, 6.0),
    (5.0, 24.0),
    (6.5, 287.88527781504436),
    (7.0, 720.0),
    (8.25, 8376.5123509199252),
    (9.0, 40320.0),
    (9.75, 207358.59989024868),
    (10.0, 362880.0),
]

# P(N(0,1) > 3)
PSI_3 = 0.0013498980316300945

# P(N(0,1) > 1) and the far tail P(N(0,1) > 30)
PSI_1 = 0.15865525393145705
PSI_30 = 4.9067139271481871e-198

# mu(3) for alpha1=alpha2=1, beta=2, a=(1,1,0.5), b=1 (H_1 = 1)
CASE_I_MU = 0.032300531520649251

# mu(3) for alpha1=1.5, alpha2=1, beta=0.5, a3=-2 (H_1 = 1)
CASE_VII_MU = 0.024298164569341701

# omega_S and b_S at S=e^2 for the drift-dominated example above
CASE_VII_OMEGA = 0.46735582791521788
CASE_VII_B = 2.2336779139576089

# exp(-e^2), the gumbel cdf at x = -2
GUMBEL_AT_MINUS_2 = 0.0006179789893310935

# mu(3) for the integrated model with one component
INTEGRATED_MU_AT_3 = 0.0022847952248919569

# storage scales at hurst=0.25, c=1
STORAGE_T0 = 0.33333333333333333
STORAGE_A = 1.7547653506033233
STORAGE_SCRIPT_A = 0.86602540378443865
STORAGE_SCRIPT_B = 0.84375
