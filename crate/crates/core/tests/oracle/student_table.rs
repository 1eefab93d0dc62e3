#![allow(clippy::excessive_precision)]

// Student t CDF values computed with 50-digit arithmetic (mpmath betainc).
// Rows: (dof, t, cdf).
pub const STUDENT_CDF_TABLE: &[(f64, f64, f64)] = &[
    (1.0, -6.0, 0.052568456711253429951),
    (1.0, -5.755102040816326, 0.054762401655030440715),
    (1.0, -5.510204081632653, 0.057145395459746019667),
    (1.0, -5.26530612244898, 0.059742668038553002835),
    (1.0, -5.020408163265306, 0.062584084208295794805),
    (1.0, -4.775510204081633, 0.065705241793740376622),
    (1.0, -4.530612244897959, 0.069148891373036103112),
    (1.0, -4.285714285714286, 0.072966790591090683226),
    (1.0, -4.040816326530612, 0.077222152289086825056),
    (1.0, -3.795918367346939, 0.081992913670869174327),
    (1.0, -3.5510204081632653, 0.087376154536112822346),
    (1.0, -3.306122448979592, 0.093494143520220895126),
    (1.0, -3.061224489795918, 0.10050271871495657081),
    (1.0, -2.816326530612245, 0.10860305240197266936),
    (1.0, -2.5714285714285716, 0.11805836392851798584),
    (1.0, -2.326530612244898, 0.12921789414182381862),
    (1.0, -2.0816326530612246, 0.14255146953870747911),
    (1.0, -1.836734693877551, 0.15869909329859203996),
    (1.0, -1.5918367346938775, 0.17854027211689880636),
    (1.0, -1.346938775510204, 0.20328382370777381766),
    (1.0, -1.1020408163265305, 0.23456018408848845763),
    (1.0, -0.8571428571428571, 0.2744372519721974091),
    (1.0, -0.6122448979591837, 0.32512867028008897854),
    (1.0, -0.3673469387755102, 0.38794081437860888651),
    (1.0, -0.12244897959183673, 0.46121634773983447411),
    (1.0, 0.12244897959183673, 0.53878365226016552589),
    (1.0, 0.3673469387755102, 0.61205918562139111349),
    (1.0, 0.6122448979591837, 0.67487132971991102146),
    (1.0, 0.8571428571428571, 0.7255627480278025909),
    (1.0, 1.1020408163265305, 0.76543981591151154237),
    (1.0, 1.346938775510204, 0.79671617629222618234),
    (1.0, 1.5918367346938775, 0.82145972788310119364),
    (1.0, 1.836734693877551, 0.84130090670140796004),
    (1.0, 2.0816326530612246, 0.85744853046129252089),
    (1.0, 2.326530612244898, 0.87078210585817618138),
    (1.0, 2.5714285714285716, 0.88194163607148201416),
    (1.0, 2.816326530612245, 0.89139694759802733064),
    (1.0, 3.061224489795918, 0.89949728128504342919),
    (1.0, 3.306122448979592, 0.90650585647977910487),
    (1.0, 3.5510204081632653, 0.91262384546388717765),
    (1.0, 3.795918367346939, 0.91800708632913082567),
    (1.0, 4.040816326530612, 0.92277784771091317494),
    (1.0, 4.285714285714286, 0.92703320940890931677),
    (1.0, 4.530612244897959, 0.93085110862696389689),
    (1.0, 4.775510204081633, 0.93429475820625962338),
    (1.0, 5.020408163265306, 0.9374159157917042052),
    (1.0, 5.26530612244898, 0.94025733196144699716),
    (1.0, 5.510204081632653, 0.94285460454025398033),
    (1.0, 5.755102040816326, 0.94523759834496955928),
    (1.0, 6.0, 0.94743154328874657005),
    (5.0, -6.0, 0.00092306914479700721301),
    (5.0, -5.755102040816326, 0.0011113995112738206628),
    (5.0, -5.510204081632653, 0.0013465405207045213116),
    (5.0, -5.26530612244898, 0.0016422313711432947183),
    (5.0, -5.020408163265306, 0.0020168550775141600355),
    (5.0, -4.775510204081633, 0.0024952057907136136839),
    (5.0, -4.530612244897959, 0.0031109962017505748394),
    (5.0, -4.285714285714286, 0.0039104366833852774856),
    (5.0, -4.040816326530612, 0.0049573703749326468074),
    (5.0, -3.795918367346939, 0.0063406672206684042158),
    (5.0, -3.5510204081632653, 0.008184885491313844505),
    (5.0, -3.306122448979592, 0.010665615791492973173),
    (5.0, -3.061224489795918, 0.01403141544338563594),
    (5.0, -2.816326530612245, 0.018634723590525764465),
    (5.0, -2.5714285714285716, 0.024974326353948793231),
    (5.0, -2.326530612244898, 0.033751112382119717053),
    (5.0, -2.0816326530612246, 0.04593556616052425196),
    (5.0, -1.836734693877551, 0.06283712986101782339),
    (5.0, -1.5918367346938775, 0.086148759620953277253),
    (5.0, -1.346938775510204, 0.11791264064515512525),
    (5.0, -1.1020408163265305, 0.16032148440348378319),
    (5.0, -0.8571428571428571, 0.21526146435837804349),
    (5.0, -0.6122448979591837, 0.28357255219551241194),
    (5.0, -0.3673469387755102, 0.36419806462445618884),
    (5.0, -0.12244897959183673, 0.45365643765359366606),
    (5.0, 0.12244897959183673, 0.54634356234640633394),
    (5.0, 0.3673469387755102, 0.63580193537554381116),
    (5.0, 0.6122448979591837, 0.71642744780448758806),
    (5.0, 0.8571428571428571, 0.78473853564162195651),
    (5.0, 1.1020408163265305, 0.83967851559651621681),
    (5.0, 1.346938775510204, 0.88208735935484487475),
    (5.0, 1.5918367346938775, 0.91385124037904672275),
    (5.0, 1.836734693877551, 0.93716287013898217661),
    (5.0, 2.0816326530612246, 0.95406443383947574804),
    (5.0, 2.326530612244898, 0.96624888761788028295),
    (5.0, 2.5714285714285716, 0.97502567364605120677),
    (5.0, 2.816326530612245, 0.98136527640947423553),
    (5.0, 3.061224489795918, 0.98596858455661436406),
    (5.0, 3.306122448979592, 0.98933438420850702683),
    (5.0, 3.5510204081632653, 0.9918151145086861555),
    (5.0, 3.795918367346939, 0.99365933277933159578),
    (5.0, 4.040816326530612, 0.99504262962506735319),
    (5.0, 4.285714285714286, 0.99608956331661472251),
    (5.0, 4.530612244897959, 0.99688900379824942516),
    (5.0, 4.775510204081633, 0.99750479420928638632),
    (5.0, 5.020408163265306, 0.99798314492248583996),
    (5.0, 5.26530612244898, 0.99835776862885670528),
    (5.0, 5.510204081632653, 0.99865345947929547869),
    (5.0, 5.755102040816326, 0.99888860048872617934),
    (5.0, 6.0, 0.99907693085520299279),
    (30.0, -6.0, 0.0000006971384383602371351),
    (30.0, -5.755102040816326, 0.000001384797608723850411),
    (30.0, -5.510204081632653, 0.0000027587754404028202129),
    (30.0, -5.26530612244898, 0.0000055061062840774100855),
    (30.0, -5.020408163265306, 0.000010996079860336653368),
    (30.0, -4.775510204081633, 0.000021942633684929983922),
    (30.0, -4.530612244897959, 0.000043682748926826811853),
    (30.0, -4.285714285714286, 0.000086602382354199490573),
    (30.0, -4.040816326530612, 0.00017064310431603336527),
    (30.0, -3.795918367346939, 0.00033345495256163581572),
    (30.0, -3.5510204081632653, 0.00064466810564131964719),
    (30.0, -3.306122448979592, 0.0012298745440383757811),
    (30.0, -3.061224489795918, 0.0023089114056991924784),
    (30.0, -2.816326530612245, 0.0042530919171760274126),
    (30.0, -2.5714285714285716, 0.0076635989517361713743),
    (30.0, -2.326530612244898, 0.013466177508919325409),
    (30.0, -2.0816326530612246, 0.023003616412373958822),
    (30.0, -1.836734693877551, 0.038087732722700611703),
    (30.0, -1.5918367346938775, 0.060952560281900661722),
    (30.0, -1.346938775510204, 0.094043684026895909395),
    (30.0, -1.1020408163265305, 0.13960350356534922937),
    (30.0, -0.8571428571428571, 0.19908080694987912751),
    (30.0, -0.6122448979591837, 0.272494349599002611),
    (30.0, -0.3673469387755102, 0.35796952447876220373),
    (30.0, -0.12244897959183673, 0.45168003065642239287),
    (30.0, 0.12244897959183673, 0.54831996934357760713),
    (30.0, 0.3673469387755102, 0.64203047552123779627),
    (30.0, 0.6122448979591837, 0.727505650400997389),
    (30.0, 0.8571428571428571, 0.80091919305012087249),
    (30.0, 1.1020408163265305, 0.86039649643465077063),
    (30.0, 1.346938775510204, 0.9059563159731040906),
    (30.0, 1.5918367346938775, 0.93904743971809933828),
    (30.0, 1.836734693877551, 0.9619122672772993883),
    (30.0, 2.0816326530612246, 0.97699638358762604118),
    (30.0, 2.326530612244898, 0.98653382249108067459),
    (30.0, 2.5714285714285716, 0.99233640104826382863),
    (30.0, 2.816326530612245, 0.99574690808282397259),
    (30.0, 3.061224489795918, 0.99769108859430080752),
    (30.0, 3.306122448979592, 0.99877012545596162422),
    (30.0, 3.5510204081632653, 0.99935533189435868035),
    (30.0, 3.795918367346939, 0.99966654504743836418),
    (30.0, 4.040816326530612, 0.99982935689568396663),
    (30.0, 4.285714285714286, 0.99991339761764580051),
    (30.0, 4.530612244897959, 0.99995631725107317319),
    (30.0, 4.775510204081633, 0.99997805736631507002),
    (30.0, 5.020408163265306, 0.99998900392013966335),
    (30.0, 5.26530612244898, 0.99999449389371592259),
    (30.0, 5.510204081632653, 0.99999724122455959718),
    (30.0, 5.755102040816326, 0.99999861520239127615),
    (30.0, 6.0, 0.99999930286156163976),
    (200.0, -6.0, 0.0000000045575601744051926754),
    (200.0, -5.755102040816326, 0.000000016079538113071369118),
    (200.0, -5.510204081632653, 0.000000054773571426326469601),
    (200.0, -5.26530612244898, 0.00000017989708530189404724),
    (200.0, -5.020408163265306, 0.00000056890659165245715634),
    (200.0, -4.775510204081633, 0.0000017299830081448390855),
    (200.0, -4.530612244897959, 0.000005051989697906320102),
    (200.0, -4.285714285714286, 0.000014150039698479908952),
    (200.0, -4.040816326530612, 0.000037966921616104300056),
    (200.0, -3.795918367346939, 0.000097478989592663178469),
    (200.0, -3.5510204081632653, 0.00023922805213349687996),
    (200.0, -3.306122448979592, 0.00056063929380005832513),
    (200.0, -3.061224489795918, 0.0012535545850474710844),
    (200.0, -2.816326530612245, 0.0026721361105256826779),
    (200.0, -2.5714285714285716, 0.0054269181622411312468),
    (200.0, -2.326530612244898, 0.010495798196477603438),
    (200.0, -2.0816326530612246, 0.019324428092219978629),
    (200.0, -1.836734693877551, 0.033866616809111558424),
    (200.0, -1.5918367346938775, 0.056500344995302641718),
    (200.0, -1.346938775510204, 0.089762086011586361964),
    (200.0, -1.1020408163265305, 0.13588417191945093311),
    (200.0, -0.8571428571428571, 0.19619591944193425594),
    (200.0, -0.6122448979591837, 0.27053558704949618338),
    (200.0, -0.3673469387755102, 0.35687432943941441592),
    (200.0, -0.12244897959183673, 0.4513332012725623233),
    (200.0, 0.12244897959183673, 0.5486667987274376767),
    (200.0, 0.3673469387755102, 0.64312567056058558408),
    (200.0, 0.6122448979591837, 0.72946441295050381662),
    (200.0, 0.8571428571428571, 0.80380408055806574406),
    (200.0, 1.1020408163265305, 0.86411582808054906689),
    (200.0, 1.346938775510204, 0.91023791398841363804),
    (200.0, 1.5918367346938775, 0.94349965500469735828),
    (200.0, 1.836734693877551, 0.96613338319088844158),
    (200.0, 2.0816326530612246, 0.98067557190778002137),
    (200.0, 2.326530612244898, 0.98950420180352239656),
    (200.0, 2.5714285714285716, 0.99457308183775886875),
    (200.0, 2.816326530612245, 0.99732786388947431732),
    (200.0, 3.061224489795918, 0.99874644541495252892),
    (200.0, 3.306122448979592, 0.99943936070619994167),
    (200.0, 3.5510204081632653, 0.99976077194786650312),
    (200.0, 3.795918367346939, 0.99990252101040733682),
    (200.0, 4.040816326530612, 0.9999620330783838957),
    (200.0, 4.285714285714286, 0.99998584996030152009),
    (200.0, 4.530612244897959, 0.99999494801030209368),
    (200.0, 4.775510204081633, 0.99999827001699185516),
    (200.0, 5.020408163265306, 0.99999943109340834754),
    (200.0, 5.26530612244898, 0.99999982010291469811),
    (200.0, 5.510204081632653, 0.99999994522642857367),
    (200.0, 5.755102040816326, 0.99999998392046188693),
    (200.0, 6.0, 0.99999999544243982559),
];

// Upper tails P(T >= t), same arithmetic. Rows: (dof, t, tail).
pub const STUDENT_UPPER_TAIL_TABLE: &[(f64, f64, f64)] = &[
    (5.0, 20.0, 2.8877581866120860461e-6),
    (30.0, 8.0, 3.1329112378503794717e-9),
    (200.0, 7.5, 1.0195249576464274689e-12),
    (1.0, 10000.0, 0.000031830988512275772396),
    (10.0, 2.228139, 0.024999993726441280881),
];
