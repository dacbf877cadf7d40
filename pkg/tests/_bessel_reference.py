"""Reference values for the scaled modified Bessel function.

Frozen from a 50-digit arbitrary-precision evaluation of
besseli(nu, z) * exp(-z); entries below 1e-300 are recorded as 0.0.
"""

# (order, argument, I_nu(z) * exp(-z))
IVE_REFERENCE = [
    (0.0, 1e-10, 0.9999999999),
    (0.0, 0.01, 0.9900745851497075),
    (0.0, 0.7, 0.55930552650706833),
    (0.0, 3.0, 0.2430003541618254),
    (0.0, 12.0, 0.11642622121344044),
    (0.0, 24.9, 0.080359332611532214),
    (0.0, 25.1, 0.080035197254296236),
    (0.0, 49.0, 0.057138847093590208),
    (0.0, 65.0, 0.049578695913837841),
    (0.0, 120.0, 0.036456396116413918),
    (0.0, 260.0, 0.024753270650606427),
    (0.0, 419.0, 0.019495427912682804),
    (0.0, 421.0, 0.019449037725111671),
    (0.0, 699.0, 0.015092083422186381),
    (0.0, 705.0, 0.015027701660471416),
    (0.0, 1500.0, 0.010301504096519598),
    (0.5, 1e-10, 7.9788456072307691e-6),
    (0.5, 0.01, 0.078995864259768),
    (0.5, 0.7, 0.35924308050380715),
    (0.5, 3.0, 0.22975850339753861),
    (0.5, 12.0, 0.11516471648609754),
    (0.5, 24.9, 0.079948513324558087),
    (0.5, 25.1, 0.079629356308658479),
    (0.5, 49.0, 0.056991754343061811),
    (0.5, 65.0, 0.049482699866005281),
    (0.5, 120.0, 0.036418281019735969),
    (0.5, 260.0, 0.02474134993300264),
    (0.5, 419.0, 0.019489605766054325),
    (0.5, 421.0, 0.01944325705415275),
    (0.5, 699.0, 0.015089382860001316),
    (0.5, 705.0, 0.015025035518391614),
    (0.5, 1500.0, 0.010300645387285055),
    (1.0, 1e-10, 4.9999999995000002e-11),
    (1.0, 0.01, 0.0049503110471182757),
    (1.0, 0.7, 0.18466998276274732),
    (1.0, 3.0, 0.19682671329730085),
    (1.0, 12.0, 0.11146429929018098),
    (1.0, 24.9, 0.078728794882103129),
    (1.0, 25.1, 0.078424315178368414),
    (1.0, 49.0, 0.056552760159615894),
    (1.0, 65.0, 0.049195831377471762),
    (1.0, 120.0, 0.036304175332028956),
    (1.0, 260.0, 0.024705622258356175),
    (1.0, 419.0, 0.019472149764836462),
    (1.0, 421.0, 0.01942592535626335),
    (1.0, 699.0, 0.015081284073901373),
    (1.0, 705.0, 0.015017039931245657),
    (1.0, 1500.0, 0.01029806968913304),
    (2.0, 1e-10, 1.2499999998750001e-21),
    (2.0, 0.01, 1.2375726052377899e-5),
    (2.0, 0.7, 0.031677004327790245),
    (2.0, 3.0, 0.11178254529695816),
    (2.0, 12.0, 0.09784883799841028),
    (2.0, 24.9, 0.07403573462903397),
    (2.0, 25.1, 0.073786247837693176),
    (2.0, 49.0, 0.054830571168707927),
    (2.0, 65.0, 0.048064978025300248),
    (2.0, 120.0, 0.035851326527546769),
    (2.0, 260.0, 0.024563227402465225),
    (2.0, 419.0, 0.019402482090416282),
    (2.0, 421.0, 0.019356753044084291),
    (2.0, 699.0, 0.015048932394793244),
    (2.0, 705.0, 0.01498510012875157),
    (2.0, 1500.0, 0.010287773336934087),
    (2.6666666666666665, 1e-10, 8.4567591828193739e-29),
    (2.6666666666666665, 0.01, 1.8038370933166529e-7),
    (2.6666666666666665, 0.7, 0.0077848536205874641),
    (2.6666666666666665, 3.0, 0.065228476015392665),
    (2.6666666666666665, 12.0, 0.08553341695635668),
    (2.6666666666666665, 24.9, 0.069468149151082277),
    (2.6666666666666665, 25.1, 0.069269823711190306),
    (2.6666666666666665, 49.0, 0.053100351663085723),
    (2.6666666666666665, 65.0, 0.046919831777669663),
    (2.6666666666666665, 120.0, 0.035387687667524653),
    (2.6666666666666665, 260.0, 0.024416426588570438),
    (2.6666666666666665, 419.0, 0.019330497606184296),
    (2.6666666666666665, 421.0, 0.019285279152496164),
    (2.6666666666666665, 699.0, 0.015015455840840033),
    (2.6666666666666665, 705.0, 0.014952049156208842),
    (2.6666666666666665, 1500.0, 0.010277106514260173),
    (3.3333333333333335, 1e-10, 4.9727609910660996e-36),
    (3.3333333333333335, 0.01, 2.2851978847921056e-9),
    (3.3333333333333335, 0.7, 0.0016665937202748601),
    (3.3333333333333335, 3.0, 0.034121667641310923),
    (3.3333333333333335, 12.0, 0.072010583924011803),
    (3.3333333333333335, 24.9, 0.064012658579013706),
    (3.3333333333333335, 25.1, 0.063872175567866816),
    (3.3333333333333335, 49.0, 0.050956312507054522),
    (3.3333333333333335, 65.0, 0.045487704381369778),
    (3.3333333333333335, 120.0, 0.03480040445675872),
    (3.3333333333333335, 260.0, 0.024228972766382846),
    (3.3333333333333335, 419.0, 0.019238338725121551),
    (3.3333333333333335, 421.0, 0.019193772111527833),
    (3.3333333333333335, 699.0, 0.014972524010082034),
    (3.3333333333333335, 705.0, 0.014909662190547039),
    (3.3333333333333335, 1500.0, 0.010263408281161911),
    (3.7, 1e-10, 4.986356907628967e-40),
    (3.7, 0.01, 1.9653627748852962e-10),
    (3.7, 0.7, 0.00067909980033167727),
    (3.7, 3.0, 0.022917538926262556),
    (3.7, 12.0, 0.064480135649692531),
    (3.7, 24.9, 0.060727809549625776),
    (3.7, 25.1, 0.060620326159528337),
    (3.7, 49.0, 0.049620440547574201),
    (3.7, 65.0, 0.044587760899683201),
    (3.7, 120.0, 0.034426962041183051),
    (3.7, 260.0, 0.024108881828147142),
    (3.7, 419.0, 0.019179155115957692),
    (3.7, 421.0, 0.019135006007745548),
    (3.7, 699.0, 0.014944910039068526),
    (3.7, 705.0, 0.014882398132172524),
    (3.7, 1500.0, 0.010254586409962525),
    (5.5, 1e-10, 7.6756571498131511e-60),
    (5.5, 0.01, 7.5993123139086331e-16),
    (5.5, 0.7, 5.4616413516847106e-6),
    (5.5, 3.0, 0.0022565171233900413),
    (5.5, 12.0, 0.032002695210841497),
    (5.5, 24.9, 0.043339839751439614),
    (5.5, 25.1, 0.043380518730652805),
    (5.5, 49.0, 0.041843344260014277),
    (5.5, 65.0, 0.03922026535798294),
    (5.5, 120.0, 0.032122858778168118),
    (5.5, 260.0, 0.023351807843423614),
    (5.5, 419.0, 0.018803432896810229),
    (5.5, 421.0, 0.018761914024266877),
    (5.5, 699.0, 0.014768800561712396),
    (5.5, 705.0, 0.014708510103300264),
    (5.5, 1500.0, 0.010198118350260358),
    (10.0, 1e-10, 2.6911444551982587e-110),
    (10.0, 0.01, 2.6643731761165953e-30),
    (10.0, 0.7, 3.8172050783813278e-12),
    (10.0, 3.0, 9.690750884604124e-7),
    (10.0, 12.0, 0.0019203870306456725),
    (10.0, 24.9, 0.010647658221373188),
    (10.0, 25.1, 0.010775651399058227),
    (10.0, 49.0, 0.020453370178966277),
    (10.0, 65.0, 0.022871481915410953),
    (10.0, 120.0, 0.02399738885975591),
    (10.0, 260.0, 0.020415665744392929),
    (10.0, 419.0, 0.017300080656593288),
    (10.0, 421.0, 0.017268723183064537),
    (10.0, 699.0, 0.01404953853329519),
    (10.0, 705.0, 0.013998135005111462),
    (10.0, 1500.0, 0.0099636710657661553),
    (16.25, 1e-10, 9.6036699848403899e-182),
    (16.25, 0.01, 9.5081256527056298e-52),
    (16.25, 0.7, 4.6169775330756315e-22),
    (16.25, 3.0, 9.75485128591446e-13),
    (16.25, 12.0, 4.6604053504706833e-6),
    (16.25, 24.9, 0.00043178947445685172),
    (16.25, 25.1, 0.00044749992600717324),
    (16.25, 49.0, 0.0038507045010791183),
    (16.25, 65.0, 0.0064707721556789098),
    (16.25, 120.0, 0.012096847062503799),
    (16.25, 260.0, 0.014884665242058543),
    (16.25, 419.0, 0.014221179262509172),
    (16.25, 421.0, 0.014208635983612555),
    (16.25, 699.0, 0.012492864508170216),
    (16.25, 705.0, 0.012459609916371152),
    (16.25, 1500.0, 0.0094332490478571969),
    (6.283185307179586, 1e-10, 1.5361206230140376e-68),
    (6.283185307179586, 0.01, 2.8026335924583816e-18),
    (6.283185307179586, 0.7, 5.6013380076158665e-7),
    (6.283185307179586, 3.0, 0.00069985194839050741),
    (6.283185307179586, 12.0, 0.021792295188098776),
    (6.283185307179586, 24.9, 0.035937637210071997),
    (6.283185307179586, 25.1, 0.036025123766144094),
    (6.283185307179586, 49.0, 0.038054653074512627),
    (6.283185307179586, 65.0, 0.036516065218857289),
    (6.283185307179586, 120.0, 0.030906618809598477),
    (6.283185307179586, 260.0, 0.022940289211904203),
    (6.283185307179586, 419.0, 0.018597259184690301),
    (6.283185307179586, 421.0, 0.01855716858084114),
    (6.283185307179586, 699.0, 0.014671562231561607),
    (6.283185307179586, 705.0, 0.014612490778199489),
    (6.283185307179586, 1500.0, 0.01016678536827798),
    (33.33, 1e-10, 0.0),
    (33.33, 0.01, 7.2388285447524456e-115),
    (33.33, 0.7, 1.1446483147898207e-53),
    (33.33, 3.0, 1.4191109932793779e-33),
    (33.33, 12.0, 5.3764719699365831e-17),
    (33.33, 24.9, 1.2531048266065847e-10),
    (33.33, 25.1, 1.4297743110031964e-10),
    (33.33, 49.0, 9.1159510495320738e-7),
    (33.33, 65.0, 1.0813807058270566e-5),
    (33.33, 120.0, 0.00035979018834137683),
    (33.33, 260.0, 0.0029196165465731664),
    (33.33, 419.0, 0.0051740388206078463),
    (33.33, 421.0, 0.0051943623562264014),
    (33.33, 699.0, 0.0068149920048548574),
    (33.33, 705.0, 0.006832006787739287),
    (33.33, 1500.0, 0.0071127244478340889),
    (60.0, 1e-10, 0.0),
    (60.0, 0.01, 1.0320070020539218e-220),
    (60.0, 0.7, 2.6349586781462884e-110),
    (60.0, 3.0, 2.2826091070380838e-73),
    (60.0, 12.0, 6.4933147353536076e-41),
    (60.0, 24.9, 1.1432075226167877e-26),
    (60.0, 25.1, 1.5734271088668352e-26),
    (60.0, 49.0, 1.3773813198207576e-16),
    (60.0, 65.0, 1.9688436207351423e-13),
    (60.0, 120.0, 1.4108617830286293e-8),
    (60.0, 260.0, 2.4800328176055599e-5),
    (60.0, 419.0, 0.00026618756672519707),
    (60.0, 421.0, 0.00027101436422212025),
    (60.0, 699.0, 0.0011488972691926317),
    (60.0, 705.0, 0.0011693341944990766),
    (60.0, 1500.0, 0.0031020086947174048),
    (95.5, 1e-10, 0.0),
    (95.5, 0.01, 0.0),
    (95.5, 0.7, 1.4137540185628077e-193),
    (95.5, 3.0, 3.3058799025120878e-134),
    (95.5, 12.0, 1.8153036160905207e-80),
    (95.5, 24.9, 2.8975357247204313e-55),
    (95.5, 25.1, 5.224477498900487e-55),
    (95.5, 49.0, 1.0046139789397847e-35),
    (95.5, 65.0, 4.6857522704495844e-29),
    (95.5, 120.0, 5.5612613386440625e-18),
    (95.5, 260.0, 7.0006832847569301e-10),
    (95.5, 419.0, 3.7843411302264928e-7),
    (95.5, 421.0, 3.9735413989943617e-7),
    (95.5, 699.0, 2.2278063171054626e-5),
    (95.5, 705.0, 2.3445352306406552e-5),
    (95.5, 1500.0, 0.00049273695493723874),
    (150.0, 1e-10, 0.0),
    (150.0, 0.01, 0.0),
    (150.0, 0.7, 0.0),
    (150.0, 3.0, 2.2928886259476704e-238),
    (150.0, 12.0, 7.2064227776824458e-152),
    (150.0, 24.9, 1.4089345776752926e-109),
    (150.0, 25.1, 3.893409606240525e-109),
    (150.0, 49.0, 1.1019290346846283e-74),
    (150.0, 65.0, 5.8668164730095749e-62),
    (150.0, 120.0, 3.3456188177248928e-39),
    (150.0, 260.0, 1.1129734630746703e-20),
    (150.0, 419.0, 5.4470611614445792e-14),
    (150.0, 421.0, 6.1514563539055547e-14),
    (150.0, 699.0, 1.6240356428528007e-9),
    (150.0, 705.0, 1.8520092399044411e-9),
    (150.0, 1500.0, 5.7189610776040827e-6),
]
