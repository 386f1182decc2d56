//! Frozen float64 reference values for [`super::hand_set_model`] on
//! [`super::fixture_batch`] / [`super::fixture_noise`], and for a standalone
//! loss evaluation on 5x7 tensors.

pub const TRAIN_RECON: &[f64] = &[
    0.49204526763112466,
    0.3784558991955717,
    0.5342386651836577,
    0.47851526656268906,
    0.5646877161553486,
    0.6002528894144802,
    0.4151448859526221,
    0.30154654307472,
    0.46726060589880875,
    0.7695621256989343,
    0.556892094706174,
    0.3311311675203338,
    0.41100161949736547,
    0.5734727460965184,
    0.4540054769232905,
    0.3664286966723438,
    0.46435915740694145,
    0.563985444054338,
    0.4395421480168417,
    0.5910110787605584,
    0.423297520165821,
    0.4022235745207714,
    0.5535336225842455,
    0.5970903642510342,
];
pub const TRAIN_MU: &[f64] = &[
    -0.27102803702113376,
    0.19490608151934963,
    0.41472899211456005,
    0.09223472864622789,
    -0.3754193135378577,
    0.4602808842177314,
    -0.90234262919132,
    0.3344414546233388,
];
pub const TRAIN_LOGVAR: &[f64] = &[
    0.19997808856651003,
    0.6359122071069934,
    0.8959026353456988,
    -1.168791937578856,
    -0.10748232508424774,
    0.3114177953072859,
    -0.6221155925759523,
    0.5846684912387066,
];
pub const TRAIN_BCE: f64 = 4.248464262865381;
pub const TRAIN_KL: f64 = 0.41329972767606843;
pub const GRADIENTS: [&[f64]; 14] = [
    &[
        0.0283629648596877,
        -0.06717409439637878,
        -0.18719709405335028,
        0.06717409439637884,
        -0.028362964859687645,
        0.18719709405335033,
        0.006050194852148957,
        0.030428889063681464,
        0.09425296277183907,
        -0.030428889063681422,
        -0.006050194852148916,
        -0.09425296277183903,
        -0.2761249863408246,
        -0.1343152391119048,
        0.19788209040122898,
        0.13431523911190493,
        0.2761249863408247,
        -0.19788209040122884,
        0.025700882315452867,
        -0.07766917390871508,
        -0.2199932844572372,
        0.07766917390871508,
        -0.025700882315452867,
        0.2199932844572372,
        0.04867886772393645,
        0.03296097477032566,
        -0.05804427225478423,
        -0.032960974770325675,
        -0.04867886772393647,
        0.058044272254784215,
        -0.2253664405265342,
        -0.12245140541743244,
        0.19350900814507682,
        0.12245140541743244,
        0.2253664405265342,
        -0.19350900814507682,
        0.015066056557920766,
        0.00927837603848209,
        -0.047514272622449505,
        -0.009278376038482073,
        -0.015066056557920749,
        0.04751427262244952,
        -0.12756670995449948,
        -0.2234477334221303,
        -0.10997065309316262,
        0.22344773342213028,
        0.12756670995449945,
        0.1099706530931626,
    ],
    &[
        5.551115123125783e-17,
        4.163336342344337e-17,
        1.3877787807814457e-16,
        0.0,
        -1.0408340855860843e-17,
        0.0,
        1.734723475976807e-17,
        0.0,
    ],
    &[
        0.29462748852234033,
        -0.10959594835693852,
        0.1956333208143023,
        0.33581478714491275,
        0.025545417958505085,
        0.0796542000977706,
        -0.13382946163354448,
        0.15544928841106614,
    ],
    &[
        0.3190795384821472,
        -0.12040464744337204,
        0.11726574116350873,
        0.3643923657840781,
        0.03973145396020317,
        0.016814266465898932,
        -0.0952782699508547,
        0.23866326168255314,
    ],
    &[
        -0.42666896065274146,
        -0.4960732154485221,
        0.30457044171469944,
        -0.49958902991775905,
        0.25977196070348657,
        0.2944395143051405,
        -0.34902083641374204,
        -0.09428542225918407,
        0.09012059167928274,
        0.10532854916901649,
        0.1386469079087949,
        0.10701849619329765,
        0.1119692444109539,
        0.13075625338421676,
        0.06349128785867056,
        0.21986572187333506,
    ],
    &[-0.2835152469089378, 0.270465787251662],
    &[
        -0.0623636362680825,
        -0.07289941592104648,
        0.40779207577951965,
        -0.07408931633941629,
        0.3564967551690164,
        0.39875939006010575,
        -0.040017595881832506,
        -0.13143838111716535,
        0.20430371895416188,
        0.2371139397764038,
        -0.13002183242942136,
        0.23806694330005015,
        -0.11546566501693488,
        -0.12808043345027278,
        0.2102375737532586,
        0.12938785904901073,
    ],
    &[0.10248251391271987, 0.18626018272295075],
    &[
        -0.10129339327321957,
        -0.05066377220426793,
        0.0809577526982663,
        -0.2023790942721214,
        -0.48593236876572626,
        0.1943749588537236,
        -0.021512288752936946,
        -0.04297447477564938,
        0.1208086505239147,
        0.20134265457133804,
        0.8233802710732241,
        -0.20579722873621586,
        -9.840799620210353e-06,
        -0.3224876105397201,
        -0.12307537660282587,
        -0.12307442168542902,
    ],
    &[
        1.3877787807814457e-17,
        -2.7755575615628914e-17,
        -1.3877787807814457e-17,
        0.0,
        1.0408340855860843e-17,
        5.551115123125783e-17,
        0.0,
        0.0,
    ],
    &[
        -0.011792550874097696,
        -0.16606747847532954,
        0.017946830542095053,
        0.04473673883715227,
        0.07838003517177122,
        0.15461407330995713,
        0.05944790095974911,
        -0.013516148731660741,
    ],
    &[
        0.010950228432518042,
        -0.2109265839540675,
        0.11981573536734577,
        0.06910622231828709,
        -0.020474679038472776,
        0.08826649619097282,
        0.23133968193445487,
        0.018473112598722696,
    ],
    &[
        -0.1883192086625522,
        -0.06975033371595903,
        0.16645929605690932,
        -0.11148929016522204,
        0.1164303306712741,
        0.09401186073102627,
        -0.07612830427634149,
        0.06121039733574351,
        -0.11992584286335774,
        0.057405338168702164,
        -0.3609486420678308,
        -0.03347356230691844,
        -0.2358683533132011,
        -0.34840069798372747,
        0.007896807466136746,
        -0.19068883398032072,
        0.19111899558013482,
        0.13895732428444513,
        -0.23083568810989422,
        0.21801160065629677,
        -0.2432561670288688,
        -0.16114922497028336,
        0.17969817315267828,
        -0.2844125842951458,
        0.09759791348027937,
        -0.08126687330839334,
        0.39178857525882793,
        0.013152834057037066,
        0.25110698695429795,
        0.369977702261454,
        -0.026655728617416313,
        0.19085380023688747,
        0.1424415891982918,
        0.04762754473409186,
        -0.18704845754026803,
        0.07057743585219309,
        -0.122381860419482,
        -0.12239574326730003,
        0.04511924433332488,
        -0.06118541032340988,
        -0.18332756083966645,
        -0.12150209328097,
        0.13470073212154612,
        -0.20874614391898838,
        0.17729318741179648,
        0.07952086262748302,
        -0.16906312622994477,
        0.23402152466571038,
    ],
    &[
        -0.06056651972551151,
        -0.03887843321815787,
        -0.03029943295710552,
        0.004182415863684619,
        0.03486814771317735,
        0.023114966310046572,
    ],
];
pub const INFER_RECON: &[f64] = &[
    0.4896571188899262,
    0.43384650004353836,
    0.5514434746456609,
    0.4962309002358816,
    0.5155775813194027,
    0.5587328773425579,
    0.37682136336439104,
    0.42433521587583767,
    0.5591512301157598,
    0.6072526221588295,
    0.5034764775379061,
    0.5251765388138627,
    0.483472266644563,
    0.48182874100744566,
    0.4612653319653209,
    0.5233889861340372,
    0.4626488115728173,
    0.6029562237581759,
    0.48467285974368374,
    0.4832075704430614,
    0.49515214205624414,
    0.5185945437975946,
    0.4915380672706622,
    0.5503250637579301,
];
pub const INFER_MU: &[f64] = &[
    0.04021965858363519,
    0.16310784004777137,
    0.3306457190142159,
    -0.07024075987792829,
    0.044201505909474394,
    0.0803934089571544,
    -0.16819600331491322,
    0.2144577426108124,
];
pub const INFER_LOGVAR: &[f64] = &[
    0.20964527556060317,
    0.3025334570247393,
    0.46940939849864427,
    -0.20286435131434133,
    0.14606995033356127,
    0.15226185338124118,
    -0.0694489781038018,
    0.28320476782192383,
];
pub const ELBO_RECON: &[f64] = &[
    0.6248452756714576,
    0.8964193733676363,
    0.7751343188647031,
    0.22575677561061067,
    0.300565952341403,
    0.8728063385054694,
    0.006254773956443575,
    0.8205859615460007,
    0.7964752898945421,
    0.46799908293803333,
    0.3034263619656749,
    0.27886876087657175,
    0.2553598484788163,
    0.4451861532708813,
    0.5045391624400374,
    0.5533903573703435,
    0.9945092828675239,
    0.7920765953753256,
    0.6219348709822803,
    0.9879822273865211,
    0.21587808083912774,
    0.16089160979012887,
    0.6123145250644847,
    0.0448541239454606,
    0.03660891821604895,
    0.5148590426308275,
    0.4662736132746385,
    0.9163334376464666,
    0.6289678019820284,
    0.5140894113063148,
    0.49687968852271724,
    0.24801989218327616,
    0.012770437491420848,
    0.19301733969734003,
    0.6916480566400756,
];
pub const ELBO_BATCH: &[f64] = &[
    1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0,
    1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0,
];
pub const ELBO_MU: &[f64] = &[
    -0.7946423659870495,
    0.6469034225734218,
    -1.9924197841744944,
    -0.46316986495236695,
    -0.09728692567008902,
    1.2570149772868198,
    0.6894039005707556,
    -0.32721342022219785,
    -0.3685758940999591,
    -0.25019540051792494,
    1.5235294004561601,
    -0.4280249425728672,
    -0.3036803883647294,
    0.35258906728526535,
    -0.12077044508645512,
];
pub const ELBO_LOGVAR: &[f64] = &[
    0.566286820889923,
    0.27877709789523175,
    -0.49484865548031953,
    -0.35617887137148063,
    -1.0420431492726205,
    -1.8477708532350436,
    1.504875232437084,
    -0.1290791327436156,
    0.19054079685494107,
    -0.7113467608790995,
    1.0052996794197115,
    -1.8992125167929585,
    -0.5112589097391842,
    -1.8785988224635535,
    -1.5084315911799626,
];
pub const ELBO_BCE: f64 = 6.0795519647553595;
pub const ELBO_KL: f64 = 1.8016163958326405;
