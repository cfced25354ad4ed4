#include "pcep/dataset.hpp"

namespace pcep {

// US crime rates for 47 states (1960). y is offences per 10^6 population;
// X1..X15 follow the usual column order, X2 is the southern-state indicator.
const std::string& crime_csv() {
  static const std::string text = R"csv(y,X1,X2,X3,X4,X5,X6,X7,X8,X9,X10,X11,X12,X13,X14,X15
791,151,1,91,58,56,510,950,33,301,108,41,394,261,0.084602,26.2011
1635,143,0,113,103,95,583,1012,13,102,96,36,557,194,0.029599,25.2999
578,142,1,89,45,44,533,969,18,219,94,33,318,250,0.083401,24.3006
1969,136,0,121,149,141,577,994,157,80,102,39,673,167,0.015801,29.9012
1234,141,0,121,109,101,591,985,18,30,91,20,578,174,0.041399,21.2998
682,121,0,110,118,115,547,964,25,44,84,29,689,126,0.034201,20.9995
963,127,1,111,82,79,519,982,4,139,97,38,620,168,0.0421,20.6993
1555,131,1,109,115,109,542,969,50,179,79,35,472,206,0.040099,24.5988
856,157,1,90,65,62,553,955,39,286,81,28,421,239,0.071697,29.4001
705,140,0,118,71,68,632,1029,7,15,100,24,526,174,0.044498,19.5994
1674,124,0,105,121,116,580,966,101,106,77,35,657,170,0.016201,41.6
849,134,0,108,75,71,595,972,47,59,83,31,580,172,0.031201,34.2984
511,128,0,113,67,60,624,972,28,10,77,25,507,206,0.045302,36.2993
664,135,0,117,62,61,595,986,22,46,77,27,529,190,0.0532,21.501
798,152,1,87,57,53,530,986,30,72,92,43,405,264,0.0691,22.7008
946,142,1,88,81,77,497,956,33,321,116,47,427,247,0.052099,26.0991
539,143,0,110,66,63,537,977,10,6,114,35,487,166,0.076299,19.1002
929,135,1,104,123,115,537,978,31,170,89,34,631,165,0.119804,18.1996
750,130,0,116,128,128,536,934,51,24,78,34,627,135,0.019099,24.9008
1225,125,0,108,113,105,567,985,78,94,130,58,626,166,0.034801,26.401
742,126,0,108,74,67,602,984,34,12,102,33,557,195,0.0228,37.5998
439,157,1,89,47,44,512,962,22,423,97,34,288,276,0.089502,37.0994
1216,132,0,96,87,83,564,953,43,92,83,32,513,227,0.0307,25.1989
968,131,0,116,78,73,574,1038,7,36,142,42,540,176,0.041598,17.6
523,130,0,116,63,57,641,984,14,26,70,21,486,196,0.069197,21.9003
1993,131,0,121,160,143,631,1071,3,77,102,41,674,152,0.041698,22.1005
342,135,0,109,69,71,540,965,6,4,80,22,564,139,0.036099,28.4999
1216,152,0,112,82,76,571,1018,10,79,103,28,537,215,0.038201,25.8006
1043,119,0,107,166,157,521,938,168,89,92,36,637,154,0.0234,36.7009
696,166,1,89,58,54,521,973,46,254,72,26,396,237,0.075298,28.3011
373,140,0,93,55,54,535,1045,6,20,135,40,453,200,0.041999,21.7998
754,125,0,109,90,81,586,964,97,82,105,43,617,163,0.042698,30.9014
1072,147,1,104,63,64,560,972,23,95,76,24,462,233,0.049499,25.5005
923,126,0,118,97,97,542,990,18,21,102,35,589,166,0.040799,21.6997
653,123,0,102,97,87,526,948,113,76,124,50,572,158,0.0207,37.4011
1272,150,0,100,109,98,531,964,9,24,87,38,559,153,0.0069,44.0004
831,177,1,87,58,56,638,974,24,349,76,28,382,254,0.045198,31.6995
566,133,0,104,51,47,599,1024,7,40,99,27,425,225,0.053998,16.6999
826,149,1,88,61,54,515,953,36,165,86,35,395,251,0.047099,27.3004
1151,145,1,104,82,74,560,981,96,126,88,31,488,228,0.038801,29.3004
880,148,0,122,72,66,601,998,9,19,84,20,590,144,0.0251,30.0001
542,141,0,109,56,54,523,968,4,2,107,37,489,170,0.088904,12.1996
823,162,1,99,75,70,522,996,40,208,73,27,496,224,0.054902,31.9989
1030,136,0,121,95,96,574,1012,29,36,111,37,622,162,0.0281,30.0001
455,139,1,88,46,41,480,968,19,49,135,53,457,249,0.056202,32.5996
508,126,0,104,106,97,599,989,40,24,78,25,593,171,0.046598,16.6999
849,130,0,121,90,91,623,1049,3,22,113,40,588,160,0.052802,16.0997
)csv";
  return text;
}

const char* crime_csv_sha256() { return "dd3fafb68351fdac560365a1f3d0de3a8b24860276528146ce179e0d169c50c1"; }

}  // namespace pcep
