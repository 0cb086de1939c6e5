//! Reference values for K_nu(x) generated offline with 40-digit arithmetic
//! and rounded to f64. Columns: (nu, x, K_nu(x), e^x K_nu(x)).

use nmvm_core::special::{bessel_k, bessel_k_scaled, ln_bessel_k_scaled};

const REFERENCE: [(f64, f64, f64, f64); 110] = [
    (0.0, 0.001, 7.023688800562382, 7.030716002378251),
    (0.0, 0.01, 4.721244730161095, 4.768694028544462),
    (0.0, 0.1, 2.4270690247020164, 2.6823261022628944),
    (0.0, 0.5, 0.9244190712276659, 1.5241093857739094),
    (0.0, 1.0, 0.42102443824070834, 1.144463079806895),
    (0.0, 2.0, 0.11389387274953344, 0.8415682150707714),
    (0.0, 5.0, 0.0036910983340425942, 0.547807564313519),
    (0.0, 10.0, 1.778006231616765e-05, 0.39163193443659866),
    (0.0, 30.0, 2.1324774964630563e-14, 0.22788666561625373),
    (0.0, 100.0, 4.656628229175902e-45, 0.12517562165912657),
    (0.0, 600.0, 1.3558285309948523e-262, 0.05115568572023596),
    (0.25, 0.001, 11.756476271934458, 11.768238628404431),
    (0.25, 0.01, 6.16574126413924, 6.227707994041589),
    (0.25, 0.1, 2.685156871876059, 2.9675572852683985),
    (0.25, 0.5, 0.960316324931886, 1.5832939515157762),
    (0.25, 1.0, 0.4307397744485855, 1.1708721016781378),
    (0.25, 2.0, 0.11537827684085676, 0.8525365601750416),
    (0.25, 5.0, 0.0037123027320318407, 0.5509545760059713),
    (0.25, 10.0, 1.783318443980639e-05, 0.39280202707587486),
    (0.25, 30.0, 2.1346641833090355e-14, 0.22812034535022682),
    (0.25, 100.0, 4.6580764515098396e-45, 0.12521455157193678),
    (0.25, 600.0, 1.3558990901583338e-262, 0.051158347931798284),
    (0.5, 0.001, 39.59365951311664, 39.63327297606011),
    (0.5, 0.01, 12.40843453284693, 12.533141373155003),
    (0.5, 0.1, 3.58616683879726, 3.963327297606011),
    (0.5, 0.5, 1.0750476034999203, 1.772453850905516),
    (0.5, 1.0, 0.46106850444789454, 1.2533141373155003),
    (0.5, 2.0, 0.11993777196806145, 0.886226925452758),
    (0.5, 5.0, 0.0037766133746428825, 0.5604991216397929),
    (0.5, 10.0, 1.799347809370518e-05, 0.3963327297606011),
    (0.5, 30.0, 2.1412375659560114e-14, 0.22882280821594225),
    (0.5, 100.0, 4.6624238126346715e-45, 0.12533141373155002),
    (0.5, 600.0, 1.356110789669311e-262, 0.051166335397324424),
    (1.0, 0.001, 999.9962381560856, 1000.9967345590684),
    (1.0, 0.01, 99.97389411829624, 100.97864845824004),
    (1.0, 0.1, 9.853844780870606, 10.890182683049696),
    (1.0, 0.5, 1.656441120003301, 2.731009708211786),
    (1.0, 1.0, 0.6019072301972346, 1.6361534862632583),
    (1.0, 2.0, 0.13986588181652243, 1.0334768470686886),
    (1.0, 5.0, 0.004044613445452165, 0.6002738587883126),
    (1.0, 10.0, 1.8648773453825585e-05, 0.41076657059578875),
    (1.0, 30.0, 2.1677320018915495e-14, 0.2316541293777118),
    (1.0, 100.0, 4.6798537356369095e-45, 0.12579995047957854),
    (1.0, 600.0, 1.356957918112806e-262, 0.05119829772547244),
    (1.5, 0.001, 39633.25317262976, 39672.90624903617),
    (1.5, 0.01, 1253.25188781754, 1265.8472786886553),
    (1.5, 0.1, 39.44783522676986, 43.59660027366612),
    (1.5, 0.5, 3.2251428104997606, 5.317361552716548),
    (1.5, 1.0, 0.9221370088957891, 2.5066282746310007),
    (1.5, 2.0, 0.17990665795209218, 1.329340388179137),
    (1.5, 5.0, 0.004531936049571459, 0.6725989459677515),
    (1.5, 10.0, 1.9792825903075696e-05, 0.4359660027366612),
    (1.5, 30.0, 2.2126121514878785e-14, 0.23645023515647365),
    (1.5, 100.0, 4.709048050761018e-45, 0.12658472786886552),
    (1.5, 600.0, 1.35837097431876e-262, 0.05125161262298663),
    (1.614072, 0.001, 95275.01565076395, 95370.33831980568),
    (1.614072, 0.01, 2316.8054479096654, 2340.0897297626684),
    (1.614072, 0.1, 56.1214897247599, 62.023838322885915),
    (1.614072, 0.5, 3.85908550012111, 6.3625563495001165),
    (1.614072, 1.0, 1.0372868033613247, 2.81963786847746),
    (1.614072, 2.0, 0.19306531645527028, 1.4265704540457909),
    (1.614072, 5.0, 0.004680319724495558, 0.6946210359224867),
    (1.614072, 10.0, 2.0130208111158947e-05, 0.4433973404027833),
    (1.614072, 30.0, 2.225533258416485e-14, 0.2378310459640508),
    (1.614072, 100.0, 4.7173776451876555e-45, 0.12680863712449172),
    (1.614072, 600.0, 1.358772808785114e-262, 0.051266773918978305),
    (2.0, 0.001, 1999999.5000009716, 2002000.4998341391),
    (2.0, 0.01, 19999.50006838941, 20200.498385676554),
    (2.0, 0.1, 199.5039646421141, 220.4859797632568),
    (2.0, 0.5, 7.5501835512408695, 12.448148218621052),
    (2.0, 1.0, 1.6248388986351774, 4.416770052333412),
    (2.0, 2.0, 0.2537597545660559, 1.87504506213946),
    (2.0, 5.0, 0.00530894371222346, 0.787917107828844),
    (2.0, 10.0, 2.150981700693277e-05, 0.47378524855575643),
    (2.0, 30.0, 2.2769929632558262e-14, 0.24333027424143452),
    (2.0, 100.0, 4.75022530388864e-45, 0.12769162066871814),
    (2.0, 600.0, 1.3603517240552284e-262, 0.05132634671265421),
    (3.7, 0.001, 3411810326257.287, 3415223843057.485),
    (3.7, 0.01, 680739416.8575258, 687580961.7377231),
    (3.7, 0.1, 135700.95509144964, 149972.74912215964),
    (3.7, 0.5, 344.1983420870442, 567.4871279386289),
    (3.7, 1.0, 24.759623670612225, 67.30363510330965),
    (3.7, 2.0, 1.4819724497566031, 10.950377568321224),
    (3.7, 5.0, 0.012498951966274489, 1.8550089467861584),
    (3.7, 10.0, 3.39793859017359e-05, 0.7484457812931233),
    (3.7, 30.0, 2.6685012816334542e-14, 0.2851687111694136),
    (3.7, 100.0, 4.984810811117711e-45, 0.13399755390075913),
    (3.7, 600.0, 1.371371778416155e-262, 0.05174213560086547),
    (5.0, 0.001, 3.8399997600000096e+17, 3.84384168040005e+17),
    (5.0, 0.01, 3839976000099.999, 3878568400500.1997),
    (5.0, 0.1, 38376009.995835915, 42412050.19917821),
    (5.0, 0.5, 12097.979476096394, 19946.196094733717),
    (5.0, 1.0, 360.9605896012407, 981.1926115029156),
    (5.0, 2.0, 9.431049100596468, 69.68655087607675),
    (5.0, 5.0, 0.03270627371203186, 4.854041404076203),
    (5.0, 10.0, 5.754184998531228e-05, 1.2674435904713803),
    (5.0, 30.0, 3.210333510589026e-14, 0.3430714745912582),
    (5.0, 100.0, 5.2732561132929497e-45, 0.14175130151329507),
    (5.0, 600.0, 1.384347089517858e-262, 0.05223169672284156),
    (10.25, 0.001, 2.1887006285066e+39, 2.1908904238502954e+39),
    (10.25, 0.01, 1.2307935186712105e+29, 1.2431631991799674e+29),
    (10.25, 0.1, 6.919408956754446e+18, 7.647129549277171e+18),
    (10.25, 0.5, 470771982004.5399, 776171780380.5428),
    (10.25, 1.0, 378850458.5143654, 1029822317.0829768),
    (10.25, 2.0, 287064.74234743346, 2121137.4852302587),
    (10.25, 5.0, 13.901454760652625, 2063.158817150009),
    (10.25, 10.0, 0.00200444511230168, 44.15084170368047),
    (10.25, 30.0, 1.1764975485852834e-13, 1.2572611148182473),
    (10.25, 100.0, 7.85036803907424e-45, 0.21102708895400987),
    (10.25, 600.0, 1.4797747283388324e-262, 0.05583220090825502),
];

#[test]
fn matches_reference_to_1e10() {
    for &(nu, x, k, ks) in REFERENCE.iter() {
        let got_s = bessel_k_scaled(nu, x);
        assert!(
            (got_s - ks).abs() <= 1e-10 * ks.abs(),
            "scaled K_{nu}({x}): got {got_s:e} want {ks:e}"
        );
        if k > 0.0 {
            let got = bessel_k(nu, x);
            assert!(
                (got - k).abs() <= 1e-10 * k.abs(),
                "K_{nu}({x}): got {got:e} want {k:e}"
            );
        }
    }
}

#[test]
fn log_form_is_consistent() {
    for &(nu, x, _, ks) in REFERENCE.iter() {
        let l = ln_bessel_k_scaled(nu, x);
        assert!((l - ks.ln()).abs() <= 1e-10 * ks.ln().abs().max(1.0));
    }
}
